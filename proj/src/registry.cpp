#include "topickit/registry.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "topickit/engine.hpp"
#include "topickit/error.hpp"
#include "topickit/matcher.hpp"
#include "topickit/render.hpp"
#include "topickit/validator.hpp"

namespace topickit {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string key_of(const RegistryEntry& e) {
  return fmt::format("({}, {}, {})", e.topic, e.language, to_string(e.tier));
}

void require_valid(const RegistryEntry& e) {
  const auto findings = validate_stored(e.stored_regex);
  if (!has_errors(findings)) return;
  std::string codes;
  for (const auto& f : findings) {
    if (f.severity != Severity::kError) continue;
    if (!codes.empty()) codes += ", ";
    codes += to_string(f.code);
  }
  throw Error(ErrorCode::kValidationFailed, "stored regex has errors: " + codes, key_of(e));
}

RegistryEntry entry_from_json(const json& j, std::size_t index) {
  const std::string where = "/entries/" + std::to_string(index);
  try {
    RegistryEntry e;
    e.topic = j.at("topic").get<std::string>();
    e.language = j.at("language").get<std::string>();
    e.tier = parse_tier(j.at("tier").get<std::string>());
    e.version = j.at("version").get<int>();
    e.stored_regex = j.at("stored_regex").get<std::string>();
    e.published_at = j.at("published_at").get<std::string>();
    e.fingerprint = j.at("fingerprint").get<std::string>();
    return e;
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kMalformedDocument, ex.what(), where);
  }
}

ordered_json entry_to_json(const RegistryEntry& e) {
  ordered_json j;
  j["topic"] = e.topic;
  j["language"] = e.language;
  j["tier"] = to_string(e.tier);
  j["version"] = e.version;
  j["stored_regex"] = e.stored_regex;
  j["published_at"] = e.published_at;
  j["fingerprint"] = e.fingerprint;
  return j;
}

[[noreturn]] void io_fail(const std::string& what, const std::filesystem::path& p) {
  throw Error(ErrorCode::kIoError, what + ": " + std::strerror(errno), p.string());
}

}  // namespace

std::filesystem::path default_registry_path() {
  if (const char* env = std::getenv("TOPICKIT_REGISTRY"); env && *env) return env;
  return "registry.json";
}

std::string utc_now_iso8601() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Registry::Registry(std::filesystem::path path) : path_(std::move(path)) {}

std::vector<RegistryEntry> Registry::load() const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) {
    if (!std::filesystem::exists(path_)) return {};
    throw Error(ErrorCode::kIoError, "cannot read registry", path_.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what(), path_.string());
  }
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array()) {
    throw Error(ErrorCode::kMalformedDocument, "expected {\"entries\": [...]}", path_.string());
  }
  std::vector<RegistryEntry> out;
  for (std::size_t i = 0; i < j["entries"].size(); ++i) {
    out.push_back(entry_from_json(j["entries"][i], i));
  }
  return out;
}

void Registry::store(const std::vector<RegistryEntry>& entries) const {
  ordered_json j;
  j["entries"] = ordered_json::array();
  for (const auto& e : entries) j["entries"].push_back(entry_to_json(e));
  const std::string bytes = j.dump(2) + "\n";

  auto dir = path_.parent_path();
  if (dir.empty()) dir = ".";
  const auto tmp = dir / (path_.filename().string() + ".tmp." + std::to_string(::getpid()));
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) io_fail("cannot create temporary registry file", tmp);
  std::size_t written = 0;
  while (written < bytes.size()) {
    const ssize_t n = ::write(fd, bytes.data() + written, bytes.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      io_fail("write failed", tmp);
    }
    written += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0) {
    ::close(fd);
    io_fail("fsync failed", tmp);
  }
  ::close(fd);
  if (::rename(tmp.c_str(), path_.c_str()) != 0) io_fail("rename failed", path_);
}

int Registry::publish(RegistryEntry entry) const {
  require_valid(entry);
  auto entries = load();
  for (const auto& e : entries) {
    if (e.topic == entry.topic && e.language == entry.language && e.tier == entry.tier &&
        e.version >= entry.version) {
      throw Error(ErrorCode::kVersionConflict,
                  fmt::format("version {} is not above published version {}", entry.version,
                              e.version),
                  key_of(entry));
    }
  }
  if (entry.published_at.empty()) entry.published_at = utc_now_iso8601();
  entry.fingerprint = fingerprint_of(unescape_from_store(entry.stored_regex));
  entries.push_back(entry);
  store(entries);
  return entry.version;
}

RegistryEntry Registry::fetch(const std::string& topic, const std::string& language, Tier tier,
                              std::optional<int> version) const {
  std::optional<RegistryEntry> best;
  for (auto& e : load()) {
    if (e.topic != topic || e.language != language || e.tier != tier) continue;
    if (version ? e.version == *version : (!best || e.version > best->version)) best = e;
  }
  if (!best) {
    RegistryEntry probe{topic, language, tier, version.value_or(0), {}, {}, {}};
    throw Error(ErrorCode::kNotFound, version ? fmt::format("version {} not found", *version)
                                              : std::string("no published version"),
                key_of(probe));
  }
  require_valid(*best);
  return *best;
}

std::vector<RegistryEntry> Registry::list() const { return load(); }

std::string concat_for_language(const std::vector<RegistryEntry>& entries,
                                std::size_t max_entries) {
  if (entries.size() > max_entries) {
    throw Error(ErrorCode::kTooManyLangs,
                fmt::format("refusing to concatenate {} regexes (limit {})", entries.size(),
                            max_entries));
  }
  if (entries.empty()) throw Error(ErrorCode::kInvalidArgument, "nothing to concatenate");
  std::string out;
  for (const auto& e : entries) {
    if (!out.empty()) out += '|';
    out += '(';
    out += unescape_from_store(e.stored_regex);
    out += ')';
  }
  if (auto err = compile_error(out)) {
    throw Error(ErrorCode::kCompileFail, err->message, "offset " + std::to_string(err->offset));
  }
  return out;
}

}  // namespace topickit
