#include "cakemech/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "cakemech/errors.hpp"

namespace cake {

namespace {

double require_number(const Json& node, const std::string& where) {
  if (!node.is_number()) throw InputError(where + " must be a number");
  return node.get<double>();
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 0xCBF29CE484222325ull;
  for (unsigned char byte : text) {
    hash ^= byte;
    hash *= 0x100000001B3ull;
  }
  return hash;
}

}  // namespace

Instance parse_instance(const Json& doc, const std::string& origin) {
  if (!doc.is_object() || !doc.contains("cake") || !doc.contains("agents")) {
    throw InputError(origin + ": instance needs 'cake' and 'agents'");
  }
  const Json& cake_node = doc["cake"];
  if (!cake_node.is_object() || !cake_node.contains("lo") || !cake_node.contains("hi")) {
    throw InputError(origin + ": 'cake' needs 'lo' and 'hi'");
  }
  const double lo = require_number(cake_node["lo"], origin + ": cake.lo");
  const double hi = require_number(cake_node["hi"], origin + ": cake.hi");
  if (!(lo < hi)) throw InputError(origin + ": cake must have positive length");

  const Json& agents = doc["agents"];
  if (!agents.is_array() || agents.empty()) {
    throw InputError(origin + ": 'agents' must be a non-empty array");
  }

  std::vector<PiecewiseDensity> densities;
  std::vector<std::string> names;
  int index = 0;
  for (const Json& node : agents) {
    ++index;
    const std::string where = origin + ": agent " + std::to_string(index);
    if (!node.is_object() || !node.contains("breakpoints") || !node.contains("values")) {
      throw InputError(where + " needs 'breakpoints' and 'values'");
    }
    names.push_back(node.value("name", "a" + std::to_string(index)));

    std::vector<double> breakpoints;
    for (const Json& b : node["breakpoints"]) {
      breakpoints.push_back(require_number(b, where + ": breakpoint"));
    }
    std::vector<double> values;
    for (const Json& v : node["values"]) {
      values.push_back(require_number(v, where + ": value"));
    }
    if (values.size() + 1 != breakpoints.size()) {
      throw InputError(where + ": " + std::to_string(values.size()) +
                       " values do not match " + std::to_string(breakpoints.size()) +
                       " breakpoints (need breakpoints-1)");
    }
    try {
      densities.emplace_back(std::move(breakpoints), std::move(values));
    } catch (const std::exception& reason) {
      throw InputError(where + ": " + reason.what());
    }
  }

  try {
    Profile profile(Interval(lo, hi), std::move(densities));
    return Instance{std::move(profile), std::move(names)};
  } catch (const std::exception& reason) {
    throw InputError(origin + ": " + reason.what());
  }
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& failure) {
    throw InputError(path.string() + ": " + failure.what());
  }
  return parse_instance(doc, path.string());
}

Json instance_to_json(const Profile& profile, const std::vector<std::string>& names) {
  Json doc;
  doc["cake"] = {{"lo", profile.cake().lo}, {"hi", profile.cake().hi}};
  doc["agents"] = Json::array();
  for (int i = 0; i < profile.agent_count(); ++i) {
    Json agent;
    agent["name"] = i < static_cast<int>(names.size()) ? names[i]
                                                       : "a" + std::to_string(i + 1);
    agent["breakpoints"] = profile.density(i).breakpoints();
    agent["values"] = profile.density(i).values();
    doc["agents"].push_back(std::move(agent));
  }
  return doc;
}

void save_instance(const std::filesystem::path& path, const Profile& profile,
                   const std::vector<std::string>& names) {
  atomic_write_text(path, instance_to_json(profile, names).dump(2) + "\n");
}

std::string instance_digest(const Profile& profile) {
  const std::string canonical =
      instance_to_json(profile, default_names(profile.agent_count())).dump();
  char hex[32];
  std::snprintf(hex, sizeof hex, "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a(canonical)));
  return hex;
}

Json allocation_to_json(const Allocation& alloc) {
  Json doc;
  doc["complete"] = alloc.complete;
  doc["bundles"] = Json::array();
  for (const IntervalList& bundle : alloc.bundles) {
    Json pieces = Json::array();
    for (const Interval& piece : bundle) {
      pieces.push_back({{"lo", piece.lo}, {"hi", piece.hi}});
    }
    doc["bundles"].push_back(std::move(pieces));
  }
  return doc;
}

Allocation allocation_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("bundles")) {
    throw InputError("allocation needs 'bundles'");
  }
  Allocation alloc;
  alloc.complete = doc.value("complete", false);
  for (const Json& bundle_node : doc["bundles"]) {
    IntervalList bundle;
    for (const Json& piece : bundle_node) {
      const double lo = require_number(piece["lo"], "bundle piece lo");
      const double hi = require_number(piece["hi"], "bundle piece hi");
      if (!(lo < hi)) throw InputError("bundle piece must have positive length");
      bundle.emplace_back(lo, hi);
    }
    alloc.bundles.push_back(canonical_union(std::move(bundle)));
  }
  return alloc;
}

Json audit_to_json(const AuditReport& report) {
  Json doc;
  doc["utilities"] = report.utilities;
  doc["envy_free"] = report.envy_free;
  doc["envy_magnitude"] = report.envy_magnitude;
  if (report.envy_i >= 0) {
    doc["worst_envy_pair"] = {report.envy_i + 1, report.envy_j + 1};
  }
  doc["proportional"] = report.proportional;
  doc["worst_shortfall"] = report.worst_shortfall;
  doc["nash_welfare"] = report.nash_welfare;
  if (report.mnw_approx.has_value()) {
    doc["mnw_approx"] = *report.mnw_approx;
  } else {
    doc["mnw_approx"] = nullptr;
    doc["mnw_error"] = report.mnw_error;
  }
  return doc;
}

std::vector<std::string> default_names(int agents) {
  std::vector<std::string> names;
  names.reserve(agents);
  for (int i = 1; i <= agents; ++i) names.push_back("a" + std::to_string(i));
  return names;
}

void atomic_write_text(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write: " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace cake
