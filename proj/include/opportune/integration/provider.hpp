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

#ifndef OPPORTUNE__INTEGRATION__PROVIDER_HPP_
#define OPPORTUNE__INTEGRATION__PROVIDER_HPP_

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "opportune/task/task.hpp"

namespace opportune::integration
{

class ProviderError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// What a data provider knows about one object.
struct ObjectFacts
{
  std::string id;
  std::optional<double> lat;
  std::optional<double> lon;
  std::vector<std::pair<task::Minutes, task::Minutes>> open;
  std::optional<task::Minutes> visit_duration;
  std::vector<task::Atom> extra;
  /// Explicit walking minutes to other objects; these win over the
  /// coordinate estimate.
  std::map<std::string, task::Minutes> walk;

  bool has_coordinates() const {return lat.has_value() && lon.has_value();}
  bool operator==(const ObjectFacts &) const = default;
};

/// Reads one record of the provider schema:
/// { "lat": deg, "lon": deg, "open": [[min, min]], "visit_duration": min,
///   "extra": ["(atom ...)"], "walk": {"other": min} }. Every field is
/// optional. Throws ProviderError on a malformed record.
ObjectFacts facts_from_json(const std::string & id, const nlohmann::json & j);
nlohmann::json facts_to_json(const ObjectFacts & facts);

/// Parses a map of object id to record.
std::map<std::string, ObjectFacts> parse_facts_map(const nlohmann::json & j);

double haversine_km(double lat1, double lon1, double lat2, double lon2);

/// Walking time between two points, rounded up to whole minutes.
task::Minutes walk_minutes(const ObjectFacts & from, const ObjectFacts & to, double speed_kmh);

class DataProvider
{
public:
  virtual ~DataProvider() = default;
  /// Facts about `id`, or nullopt when the provider does not know it.
  /// Throws ProviderError when the provider cannot be consulted.
  virtual std::optional<ObjectFacts> lookup(const std::string & id) const = 0;
};

class FileProvider : public DataProvider
{
public:
  explicit FileProvider(std::map<std::string, ObjectFacts> records);
  /// Throws ProviderError when the file is missing or malformed.
  static FileProvider load(const std::filesystem::path & path);

  std::optional<ObjectFacts> lookup(const std::string & id) const override;
  const std::map<std::string, ObjectFacts> & records() const {return records_;}

private:
  std::map<std::string, ObjectFacts> records_;
};

/// GET `<endpoint>/objects/<id>` returning one record of the provider
/// schema; 404 means unknown.
class HttpProvider : public DataProvider
{
public:
  explicit HttpProvider(
    std::string endpoint, std::chrono::milliseconds timeout = std::chrono::milliseconds(5000));
  std::optional<ObjectFacts> lookup(const std::string & id) const override;

private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

/// Records carried by a scenario event, consulted before a base provider.
class OverlayProvider : public DataProvider
{
public:
  OverlayProvider(const DataProvider * base, std::map<std::string, ObjectFacts> overlay);
  std::optional<ObjectFacts> lookup(const std::string & id) const override;

private:
  const DataProvider * base_;
  std::map<std::string, ObjectFacts> overlay_;
};

}  // namespace opportune::integration

#endif  // OPPORTUNE__INTEGRATION__PROVIDER_HPP_
