#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "topickit/document.hpp"

namespace topickit {

struct RegistryEntry {
  std::string topic;
  std::string language;
  Tier tier = Tier::kTier1;
  int version = 1;
  std::string stored_regex;
  std::string published_at;  // UTC, "YYYY-MM-DDTHH:MM:SSZ"
  std::string fingerprint;   // of the live regex

  friend bool operator==(const RegistryEntry&, const RegistryEntry&) = default;
};

inline constexpr std::size_t kDefaultMaxConcat = 3;

// $TOPICKIT_REGISTRY, or "registry.json" in the working directory.
std::filesystem::path default_registry_path();

std::string utc_now_iso8601();

// Append-only JSON file {"entries": [...]}. Writes replace the file
// atomically; readers see either the old or the new history.
class Registry {
 public:
  explicit Registry(std::filesystem::path path);

  const std::filesystem::path& path() const { return path_; }

  // Fills published_at (when empty) and fingerprint, then appends. Throws
  // Error(kValidationFailed) when the stored regex has ERROR findings and
  // Error(kVersionConflict) unless the version exceeds every earlier version
  // of the same key. Returns the published version.
  int publish(RegistryEntry entry) const;

  // Latest version unless pinned. Throws Error(kNotFound), or
  // Error(kValidationFailed) when the stored entry no longer validates.
  RegistryEntry fetch(const std::string& topic, const std::string& language, Tier tier,
                      std::optional<int> version = std::nullopt) const;

  // All entries in publication order.
  std::vector<RegistryEntry> list() const;

 private:
  std::vector<RegistryEntry> load() const;
  void store(const std::vector<RegistryEntry>& entries) const;

  std::filesystem::path path_;
};

// "(live_1)|(live_2)|..." in the given order, usually the language regex
// first and English second. Throws Error(kTooManyLangs) above `max_entries`
// and Error(kCompileFail) if the result does not compile.
std::string concat_for_language(const std::vector<RegistryEntry>& entries,
                                std::size_t max_entries = kDefaultMaxConcat);

}  // namespace topickit
