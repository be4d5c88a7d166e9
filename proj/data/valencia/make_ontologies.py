#!/usr/bin/env python3
# Copyright 2026 The Opportune Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the ontology repository and the offline knowledge store.

repo/ holds five candidate ontologies: B and C model parcel delivery,
D, E and F model city tourism with increasing (F < D < E) taxonomic depth.
ontology_A.json is the ontology built from domain.pddl and problem.pddl.
"""

import json
import pathlib

from make_fixture import LOCATIONS

HERE = pathlib.Path(__file__).resolve().parent

# concept -> parent, listed parents first
TYPES_A = [
    ("person", "object"), ("location", "object"),
    ("accommodation", "location"), ("attraction", "location"), ("restaurant", "location"),
    ("hotel", "accommodation"),
    ("religious_site", "attraction"), ("architecture", "attraction"), ("tower", "attraction"),
    ("garden", "attraction"), ("aquarium", "attraction"), ("museum", "attraction"),
]

ONTOLOGIES = {
    "B": {
        "root": "Resource",
        "concepts": [
            ("vehicle", "Resource", []), ("truck", "vehicle", []), ("van", "vehicle", []),
            ("bicycle", "vehicle", []),
            ("package", "Resource", []), ("parcel", "package", []), ("envelope", "package", []),
            ("depot", "Resource", []), ("customer", "Resource", []), ("route", "Resource", []),
        ],
        "individuals": [("Van_17", "van"), ("North_depot", "depot")],
    },
    "C": {
        "root": "Entity",
        "concepts": [
            ("carrier", "Entity", []), ("courier", "carrier", []), ("postman", "carrier", []),
            ("shipment", "Entity", []), ("freight", "shipment", []), ("cargo", "shipment", []),
            ("warehouse", "Entity", []), ("recipient", "Entity", []), ("invoice", "Entity", []),
        ],
        "individuals": [("Port_warehouse", "warehouse")],
    },
    "D": {
        "root": "Thing",
        "concepts": [
            ("sight", "Thing", []), ("venue", "Thing", []),
            ("restaurant", "Thing", []), ("hotel", "Thing", []),
            ("religious_site", "sight", []), ("tower", "sight", []), ("garden", "sight", []),
            ("museum", "sight", []), ("aquarium", "sight", []),
            ("jazz_bar", "venue", []), ("theatre", "venue", []),
        ],
        "individuals": [
            ("Cathedral", "religious_site"), ("Serrano_towers", "tower"),
            ("Jimmy_Glass_Jazz_bar", "jazz_bar"), ("Caro_hotel", "hotel"),
        ],
    },
    "E": {
        "root": "Thing",
        "concepts": [
            ("place", "Thing", []),
            ("must_see", "place", ["must see", "attraction"]),
            ("leisure", "place", []), ("eatery", "place", []), ("lodging", "place", []),
            ("plaza", "must_see", []), ("religious_site", "must_see", []),
            ("monument", "must_see", []), ("park", "must_see", []),
            ("art_exhibition", "must_see", []),
            ("tower", "monument", []), ("market_hall", "monument", []),
            ("jazz_bar", "leisure", []), ("aquarium", "leisure", []),
            ("museum", "leisure", []), ("theatre", "leisure", []),
            ("tapas_bar", "eatery", []), ("restaurant", "eatery", []),
            ("hotel", "lodging", []),
            ("retail", "Thing", []), ("souvenir_kiosk", "retail", []),
        ],
        "individuals": [
            ("Virgen_plaza", "plaza"), ("StCatherineChapel", "religious_site"),
            ("Cathedral", "religious_site"), ("Quart_towers", "tower"),
            ("Serrano_towers", "tower"), ("Lonja", "market_hall"),
            ("Viveros_garden", "park"), ("PicassoExhibition", "art_exhibition"),
            ("Jimmy_Glass_Jazz_bar", "jazz_bar"), ("Oceanografic", "aquarium"),
            ("El_Celler_del_Tossal", "restaurant"), ("Caro_hotel", "hotel"),
            ("Mercat_kiosk", "souvenir_kiosk"),
        ],
    },
    "F": {
        "root": "Thing",
        "concepts": [
            ("plaza", "Thing", []), ("sight", "Thing", []), ("restaurant", "Thing", []),
            ("hotel", "Thing", []), ("museum", "Thing", []), ("garden", "Thing", []),
            ("market", "Thing", []),
        ],
        "individuals": [("Virgen_plaza", "plaza"), ("Viveros_garden", "garden")],
    },
}

# Tourism vocabulary. The first three attraction rows are ConceptNet's.
TOURISM_EDGES = [
    ("antonym", "attraction", "repulsion"),
    ("atLocation", "attraction", "disneyland"),
    ("causesDesire", "attraction", "flirt"),
] + [("relatedTo", "attraction", v) for v in (
    "sightseeing", "landmark", "tourist", "visit", "interest", "fame", "crowd", "ticket",
)] + [("atLocation", "attraction", v) for v in ("city", "downtown", "park")] + [
    ("hasProperty", "attraction", "popular"),
    ("hasProperty", "attraction", "interesting"),
    ("usedFor", "attraction", "entertainment"),
    ("usedFor", "attraction", "enjoyment"),
    ("isA", "attraction", "feature"),
    ("synonym", "attraction", "draw"),
    ("relatedTo", "attraction", "must_see"),
    ("similarTo", "attraction", "highlight"),
] + [
    ("relatedTo", "must_see", "highlight"),
    ("relatedTo", "object", "item"), ("relatedTo", "object", "physical"),
    ("relatedTo", "thing", "item"), ("relatedTo", "thing", "stuff"),
    ("isA", "person", "human"), ("relatedTo", "person", "individual"),
    ("isA", "location", "position"), ("relatedTo", "location", "area"),
    ("isA", "place", "location"), ("relatedTo", "place", "area"),
    ("relatedTo", "accommodation", "lodging"), ("usedFor", "accommodation", "sleeping"),
    ("relatedTo", "lodging", "accommodation"), ("usedFor", "lodging", "sleeping"),
    ("isA", "hotel", "building"), ("usedFor", "hotel", "sleeping"),
    ("atLocation", "hotel", "city"), ("relatedTo", "hotel", "room"),
    ("isA", "restaurant", "business"), ("usedFor", "restaurant", "eating"),
    ("relatedTo", "restaurant", "menu"), ("atLocation", "restaurant", "city"),
    ("relatedTo", "eatery", "restaurant"), ("usedFor", "eatery", "eating"),
    ("usedFor", "tapas_bar", "eating"), ("relatedTo", "tapas", "snack"),
    ("relatedTo", "religious", "faith"), ("relatedTo", "religious", "worship"),
    ("isA", "religious_site", "worship_place"), ("relatedTo", "site", "place"),
    ("relatedTo", "architecture", "building"), ("relatedTo", "architecture", "design"),
    ("isA", "architecture", "art"),
    ("isA", "tower", "structure"), ("hasProperty", "tower", "tall"),
    ("relatedTo", "tower", "view"),
    ("relatedTo", "garden", "flower"), ("relatedTo", "garden", "plant"),
    ("atLocation", "garden", "park"),
    ("relatedTo", "park", "green"), ("relatedTo", "park", "tree"), ("usedFor", "park", "walking"),
    ("relatedTo", "aquarium", "fish"), ("relatedTo", "aquarium", "marine"),
    ("usedFor", "aquarium", "watching"),
    ("relatedTo", "museum", "exhibit"), ("relatedTo", "museum", "collection"),
    ("usedFor", "museum", "learning"),
    ("relatedTo", "plaza", "square"), ("relatedTo", "plaza", "open_space"),
    ("atLocation", "plaza", "town"),
    ("relatedTo", "monument", "memorial"), ("relatedTo", "monument", "statue"),
    ("relatedTo", "market", "stall"), ("usedFor", "market", "shopping"),
    ("relatedTo", "hall", "building"),
    ("relatedTo", "art", "painting"), ("relatedTo", "exhibition", "display"),
    ("relatedTo", "exhibition", "show"),
    ("relatedTo", "leisure", "free_time"), ("relatedTo", "leisure", "relaxation"),
    ("relatedTo", "jazz", "music"), ("relatedTo", "jazz", "improvisation"),
    ("relatedTo", "bar", "drink"), ("atLocation", "bar", "night"),
    ("relatedTo", "theatre", "play"), ("usedFor", "theatre", "performance"),
    ("relatedTo", "sight", "view"), ("relatedTo", "sight", "landmark"),
    ("relatedTo", "venue", "event"), ("relatedTo", "venue", "stage"),
    ("relatedTo", "retail", "sale"), ("relatedTo", "souvenir", "memento"),
    ("relatedTo", "kiosk", "booth"),
]

# Delivery vocabulary, kept to relations the tourism rows never use.
DELIVERY_EDGES = [
    ("capableOf", "vehicle", "transport"), ("madeOf", "vehicle", "steel"),
    ("capableOf", "truck", "haul"), ("partOf", "trailer", "truck"),
    ("partOf", "cargo_bay", "van"), ("capableOf", "van", "deliver"),
    ("capableOf", "bicycle", "pedal"), ("partOf", "wheel", "bicycle"),
    ("receivesAction", "package", "shipped"), ("madeOf", "package", "cardboard"),
    ("receivesAction", "parcel", "wrapped"), ("madeOf", "envelope", "paper"),
    ("partOf", "loading_dock", "depot"), ("receivesAction", "depot", "stocked"),
    ("desires", "customer", "delivery"), ("partOf", "waypoint", "route"),
    ("createdBy", "route", "dispatcher"),
    ("capableOf", "carrier", "transport"), ("capableOf", "courier", "deliver"),
    ("motivatedByGoal", "courier", "wage"), ("capableOf", "postman", "deliver"),
    ("capableOf", "postman", "sort_mail"), ("receivesAction", "shipment", "shipped"),
    ("madeOf", "freight", "goods"), ("receivesAction", "cargo", "loaded"),
    ("partOf", "shelving", "warehouse"), ("receivesAction", "warehouse", "stocked"),
    ("desires", "recipient", "delivery"), ("createdBy", "invoice", "accountant"),
    ("partOf", "invoice", "billing"),
    ("partOf", "entity", "whole"), ("madeOf", "resource", "supply"),
]


def concept(cid, parent, labels=None):
    return {"id": cid, "parent": parent, "labels": labels or [cid], "annotations": []}


def build(oid, desc):
    concepts = [concept(desc["root"], None)]
    for cid, parent, labels in desc["concepts"]:
        concepts.append(concept(cid, parent, labels))
    concepts.sort(key=lambda c: c["id"])
    inds = sorted(({"id": i, "concept": c} for i, c in desc["individuals"]),
                  key=lambda x: x["id"])
    return {"id": oid, "root": desc["root"], "concepts": concepts, "individuals": inds}


def ontology_a():
    concepts = [concept("object", None)] + [concept(t, p) for t, p in TYPES_A]
    concepts.sort(key=lambda c: c["id"])
    inds = [{"id": "tourist", "concept": "person"}]
    inds += [{"id": name, "concept": info[0]} for name, info in LOCATIONS.items()]
    inds.sort(key=lambda x: x["id"])
    return {"id": "A", "root": "object", "concepts": concepts, "individuals": inds}


def write_json(path, doc):
    path.write_text(json.dumps(doc, indent=2) + "\n")


if __name__ == "__main__":
    repo = HERE / "repo"
    repo.mkdir(exist_ok=True)
    for oid, desc in ONTOLOGIES.items():
        write_json(repo / f"{oid}.json", build(oid, desc))
    write_json(HERE / "ontology_A.json", ontology_a())
    lines = ["# relation\tstart\tend\tweight"]
    lines += [f"{r}\t{s}\t{e}\t1.0" for r, s, e in TOURISM_EDGES]
    lines += [f"{r}\t{s}\t{e}\t1.0" for r, s, e in DELIVERY_EDGES]
    (HERE / "conceptnet.tsv").write_text("\n".join(lines) + "\n")
