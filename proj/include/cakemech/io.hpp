#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "cakemech/allocation.hpp"
#include "cakemech/audit.hpp"
#include "cakemech/density.hpp"

namespace cake {

using Json = nlohmann::ordered_json;

/// Instance file payload: the profile plus the agent names from the file.
struct Instance {
  Profile profile;
  std::vector<std::string> names;
};

/// Schema: { "cake": {"lo":..,"hi":..},
///           "agents": [ {"name":..,"breakpoints":[..],"values":[..]}, .. ] }
/// Breakpoints include both cake endpoints; values has length breakpoints-1.
/// Throws InputError with the offending agent/field on validation failures.
Instance parse_instance(const Json& doc, const std::string& origin);
Instance load_instance(const std::filesystem::path& path);

Json instance_to_json(const Profile& profile, const std::vector<std::string>& names);
void save_instance(const std::filesystem::path& path, const Profile& profile,
                   const std::vector<std::string>& names);

/// FNV-1a over the canonical instance serialization, as "fnv1a:<hex>".
std::string instance_digest(const Profile& profile);

Json allocation_to_json(const Allocation& alloc);
Allocation allocation_from_json(const Json& doc);

Json audit_to_json(const AuditReport& report);

std::vector<std::string> default_names(int agents);

/// Writes text atomically (temp file + rename).
void atomic_write_text(const std::filesystem::path& path, const std::string& text);

/// Serialization used for every report file; reports round-trip byte-for-byte
/// through parse + re-dump. Note: wall_time_ms is the one field exempt from
/// the bit-for-bit reproducibility guarantee.
std::string dump_report(const Json& report);

}  // namespace cake
