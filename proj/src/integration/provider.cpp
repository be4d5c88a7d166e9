// Copyright 2026 The Opportune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "opportune/integration/provider.hpp"

#include <cmath>
#include <numbers>

#include "httplib.h"
#include "opportune/ontology/tokenize.hpp"
#include "opportune/task/pddl.hpp"

namespace opportune::integration
{

namespace
{

constexpr double kEarthRadiusKm = 6371.0;

task::Minutes whole_minutes(const nlohmann::json & v, const std::string & what)
{
  if (!v.is_number()) {
    throw ProviderError(what + " must be a number");
  }
  const double d = v.get<double>();
  if (d != std::floor(d)) {
    throw ProviderError(what + " must be a whole number of minutes");
  }
  return static_cast<task::Minutes>(d);
}

}  // namespace

ObjectFacts facts_from_json(const std::string & id, const nlohmann::json & j)
{
  if (!j.is_object()) {
    throw ProviderError("record for " + id + " is not an object");
  }
  ObjectFacts f;
  f.id = id;
  const std::string where = "record " + id + ": ";
  for (const auto & [key, value] : j.items()) {
    if (key == "lat" || key == "lon") {
      if (!value.is_number()) {
        throw ProviderError(where + key + " must be a number");
      }
      (key == "lat" ? f.lat : f.lon) = value.get<double>();
    } else if (key == "open") {
      if (!value.is_array()) {
        throw ProviderError(where + "open must be a list of [start, end] pairs");
      }
      for (const auto & w : value) {
        if (!w.is_array() || w.size() != 2) {
          throw ProviderError(where + "open must be a list of [start, end] pairs");
        }
        const auto s = whole_minutes(w[0], where + "window start");
        const auto e = whole_minutes(w[1], where + "window end");
        if (s >= e) {
          throw ProviderError(where + "window [" + std::to_string(s) + ", " +
                    std::to_string(e) + "] is empty");
        }
        if (!f.open.empty() && s < f.open.back().second) {
          throw ProviderError(where + "windows must be sorted and disjoint");
        }
        f.open.emplace_back(s, e);
      }
    } else if (key == "visit_duration") {
      const auto d = whole_minutes(value, where + "visit_duration");
      if (d <= 0) {
        throw ProviderError(where + "visit_duration must be positive");
      }
      f.visit_duration = d;
    } else if (key == "extra") {
      if (!value.is_array()) {
        throw ProviderError(where + "extra must be a list of atoms");
      }
      for (const auto & a : value) {
        if (!a.is_string()) {
          throw ProviderError(where + "extra must be a list of atoms");
        }
        try {
          f.extra.push_back(task::parse_atom(a.get<std::string>()));
        } catch (const task::TaskError & e) {
          throw ProviderError(where + e.what());
        }
      }
    } else if (key == "walk") {
      if (!value.is_object()) {
        throw ProviderError(where + "walk must map object ids to minutes");
      }
      for (const auto & [other, minutes] : value.items()) {
        f.walk[other] = whole_minutes(minutes, where + "walk to " + other);
      }
    } else {
      throw ProviderError(where + "unknown field '" + key + "'");
    }
  }
  if (f.lat.has_value() != f.lon.has_value()) {
    throw ProviderError(where + "lat and lon must be given together");
  }
  return f;
}

nlohmann::json facts_to_json(const ObjectFacts & f)
{
  nlohmann::json j = nlohmann::json::object();
  if (f.has_coordinates()) {
    j["lat"] = *f.lat;
    j["lon"] = *f.lon;
  }
  j["open"] = nlohmann::json::array();
  for (const auto & [s, e] : f.open) {
    j["open"].push_back({s, e});
  }
  if (f.visit_duration) {
    j["visit_duration"] = *f.visit_duration;
  }
  if (!f.extra.empty()) {
    j["extra"] = nlohmann::json::array();
    for (const auto & a : f.extra) {
      j["extra"].push_back(a.str());
    }
  }
  if (!f.walk.empty()) {
    j["walk"] = f.walk;
  }
  return j;
}

std::map<std::string, ObjectFacts> parse_facts_map(const nlohmann::json & j)
{
  if (!j.is_object()) {
    throw ProviderError("provider data must map object ids to records");
  }
  std::map<std::string, ObjectFacts> out;
  for (const auto & [id, record] : j.items()) {
    out.emplace(id, facts_from_json(id, record));
  }
  return out;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2)
{
  const double rad = std::numbers::pi / 180.0;
  const double p1 = lat1 * rad;
  const double p2 = lat2 * rad;
  const double dp = (lat2 - lat1) * rad;
  const double dl = (lon2 - lon1) * rad;
  const double h = std::sin(dp / 2) * std::sin(dp / 2) +
    std::cos(p1) * std::cos(p2) * std::sin(dl / 2) * std::sin(dl / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

task::Minutes walk_minutes(const ObjectFacts & from, const ObjectFacts & to, double speed_kmh)
{
  if (auto it = from.walk.find(to.id); it != from.walk.end()) {
    return it->second;
  }
  if (auto it = to.walk.find(from.id); it != to.walk.end()) {
    return it->second;
  }
  if (!from.has_coordinates() || !to.has_coordinates()) {
    throw ProviderError("no coordinates for " + (from.has_coordinates() ? to.id : from.id));
  }
  const double km = haversine_km(*from.lat, *from.lon, *to.lat, *to.lon);
  return static_cast<task::Minutes>(std::ceil(km / speed_kmh * 60.0 - 1e-9));
}

FileProvider::FileProvider(std::map<std::string, ObjectFacts> records)
: records_(std::move(records))
{}

FileProvider FileProvider::load(const std::filesystem::path & path)
{
  std::string text;
  try {
    text = task::read_file(path);
  } catch (const task::TaskError & e) {
    throw ProviderError(e.what());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error & e) {
    throw ProviderError(path.string() + ": " + e.what());
  }
  return FileProvider(parse_facts_map(j));
}

std::optional<ObjectFacts> FileProvider::lookup(const std::string & id) const
{
  if (auto it = records_.find(id); it != records_.end()) {
    return it->second;
  }
  const auto key = ontology::normalize_name(id);
  for (const auto & [rid, facts] : records_) {
    if (ontology::normalize_name(rid) == key) {
      auto f = facts;
      f.id = id;
      return f;
    }
  }
  return std::nullopt;
}

HttpProvider::HttpProvider(std::string endpoint, std::chrono::milliseconds timeout)
: endpoint_(std::move(endpoint)), timeout_(timeout)
{}

std::optional<ObjectFacts> HttpProvider::lookup(const std::string & id) const
{
  httplib::Client client(endpoint_);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  const auto res = client.Get("/objects/" + id);
  if (!res) {
    throw ProviderError("provider " + endpoint_ + " unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status == 404) {
    return std::nullopt;
  }
  if (res->status != 200) {
    throw ProviderError("provider " + endpoint_ + " answered " + std::to_string(res->status));
  }
  try {
    return facts_from_json(id, nlohmann::json::parse(res->body));
  } catch (const nlohmann::json::parse_error & e) {
    throw ProviderError("provider reply for " + id + ": " + e.what());
  }
}

OverlayProvider::OverlayProvider(
  const DataProvider * base, std::map<std::string, ObjectFacts> overlay)
: base_(base), overlay_(std::move(overlay))
{}

std::optional<ObjectFacts> OverlayProvider::lookup(const std::string & id) const
{
  if (auto it = overlay_.find(id); it != overlay_.end()) {
    return it->second;
  }
  return base_ != nullptr ? base_->lookup(id) : std::nullopt;
}

}  // namespace opportune::integration
