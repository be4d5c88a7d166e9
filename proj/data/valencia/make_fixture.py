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
"""Regenerates problem.pddl and provider.json for the Valencia tour.

Walking times are haversine distances at 5 km/h rounded up to whole
minutes, the same rule the integration stage applies to new locations.
"""

import json
import math
import pathlib

HERE = pathlib.Path(__file__).resolve().parent
EARTH_RADIUS_KM = 6371.0
WALK_KMH = 5.0

# id -> (type, lat, lon, [open windows], visit/eat duration)
LOCATIONS = {
    "Caro_hotel": ("hotel", 39.4770, -0.3738, [], None),
    "Viveros_garden": ("garden", 39.4795, -0.3668, [(600, 720)], 90),
    "Cathedral": ("religious_site", 39.4755, -0.3752, [(720, 840)], 60),
    "Lonja": ("architecture", 39.4744, -0.3784, [(780, 900)], 45),
    "Quart_towers": ("tower", 39.4757, -0.3836, [(840, 900)], 30),
    "Serrano_towers": ("tower", 39.4793, -0.3760, [(900, 1140)], 30),
    "El_Celler_del_Tossal": ("restaurant", 39.4768, -0.3800, [(840, 960)], 60),
    "La_Pepica": ("restaurant", 39.4660, -0.3240, [(780, 960)], 75),
}

# Objects announced during execution; only their provider records exist.
DISCOVERED = {
    "Virgen_plaza": (39.4763, -0.3752, [(600, 1380)], 20),
    "Jimmy_Glass_Jazz_bar": (39.4778, -0.3742, [(900, 1380)], 60),
    "StCatherineChapel": (39.4748, -0.3768, [(600, 1200)], 25),
}

ACTIVE = (600, 1380)
TIME_FOR_EAT = (780, 1140)


def haversine_km(a, b):
    la1, lo1, la2, lo2 = map(math.radians, (a[0], a[1], b[0], b[1]))
    h = (math.sin((la2 - la1) / 2) ** 2
         + math.cos(la1) * math.cos(la2) * math.sin((lo2 - lo1) / 2) ** 2)
    return 2 * EARTH_RADIUS_KM * math.asin(math.sqrt(h))


def walk_minutes(a, b):
    return math.ceil(haversine_km(a, b) / WALK_KMH * 60.0)


def problem_text():
    objs = ["    tourist - person"]
    objs += [f"    {name} - {info[0]}" for name, info in LOCATIONS.items()]
    init = ["    (be tourist Caro_hotel)", "    (= (visits_done tourist) 0)"]
    for name, (typ, lat, lon, windows, dur) in LOCATIONS.items():
        if typ == "restaurant":
            init.append(f"    (free_table {name})")
            init.append(f"    (= (eat_duration {name}) {dur})")
        elif dur is not None:
            init.append(f"    (= (visit_duration {name}) {dur})")
        for start, end in windows:
            init.append(f"    (at {start} (open {name}))")
            init.append(f"    (at {end} (not (open {name})))")
    for a, ia in LOCATIONS.items():
        for b, ib in LOCATIONS.items():
            if a != b:
                init.append(f"    (= (walk_time {a} {b}) {walk_minutes(ia[1:3], ib[1:3])})")
    init.append(f"    (at {ACTIVE[0]} (active tourist))")
    init.append(f"    (at {ACTIVE[1]} (not (active tourist)))")
    init.append(f"    (at {TIME_FOR_EAT[0]} (time_for_eat tourist))")
    init.append(f"    (at {TIME_FOR_EAT[1]} (not (time_for_eat tourist)))")
    goals = [f"    (visited tourist {g})" for g in
             ("Cathedral", "Lonja", "Serrano_towers", "Quart_towers", "Viveros_garden")]
    goals += ["    (eaten tourist)", "    (be tourist Caro_hotel)"]
    return ("; Generated by make_fixture.py\n"
            "(define (problem valencia_day)\n"
            "  (:domain tourism)\n"
            "  (:objects\n" + "\n".join(objs) + ")\n"
            "  (:init\n" + "\n".join(init) + ")\n"
            "  (:goal (and\n" + "\n".join(goals) + "))\n"
            "  (:metric minimize (total-time))\n"
            "  (:horizon 0 1440))\n")


def provider():
    out = {}
    for name, (typ, lat, lon, windows, dur) in LOCATIONS.items():
        rec = {"lat": lat, "lon": lon, "open": [list(w) for w in windows]}
        if dur is not None:
            rec["visit_duration"] = dur
        out[name] = rec
    for name, (lat, lon, windows, dur) in DISCOVERED.items():
        if name == "Jimmy_Glass_Jazz_bar":
            continue  # carried inline by the scenario
        out[name] = {"lat": lat, "lon": lon, "open": [list(w) for w in windows],
                     "visit_duration": dur}
    return out


def scenario_facts(name):
    lat, lon, windows, dur = DISCOVERED[name]
    return {"lat": lat, "lon": lon, "open": [list(w) for w in windows], "visit_duration": dur}


if __name__ == "__main__":
    (HERE / "problem.pddl").write_text(problem_text())
    (HERE / "provider.json").write_text(json.dumps(provider(), indent=2) + "\n")
    print(json.dumps({"Jimmy_Glass_Jazz_bar": scenario_facts("Jimmy_Glass_Jazz_bar")}))
