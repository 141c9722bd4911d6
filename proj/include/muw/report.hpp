#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "muw/common.hpp"

namespace muw {

/// Named residuals with per-entry tolerances; the verdict passes iff every
/// residual is below its tolerance.
class CheckReport {
 public:
  struct Entry {
    std::string name;
    double value = 0.0;
    double tol = kExactTol;
    bool pass = false;
    double value_inf = std::numeric_limits<double>::quiet_NaN();  // optional diagnostic
  };

  void add(const std::string& name, double value, double tol) {
    entries_.push_back({name, value, tol, value < tol, std::numeric_limits<double>::quiet_NaN()});
  }

  void add(const std::string& name, double value, double tol, double value_inf) {
    entries_.push_back({name, value, tol, value < tol, value_inf});
  }

  void note(const std::string& text) { notes_.push_back(text); }
  void stat(const std::string& key, double value) { stats_[key] = value; }

  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<std::string>& notes() const { return notes_; }
  const std::map<std::string, double>& stats() const { return stats_; }

  const Entry* find(const std::string& name) const {
    for (const auto& e : entries_)
      if (e.name == name) return &e;
    return nullptr;
  }

  double value(const std::string& name) const {
    const Entry* e = find(name);
    if (!e) throw ParameterError("no residual named " + name);
    return e->value;
  }

  bool passed() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.pass; });
  }

  void merge(const CheckReport& other, const std::string& prefix = "") {
    for (const auto& e : other.entries_) {
      Entry copy = e;
      copy.name = prefix + e.name;
      entries_.push_back(copy);
    }
    for (const auto& n : other.notes_) notes_.push_back(prefix.empty() ? n : prefix + n);
    for (const auto& [k, v] : other.stats_) stats_[prefix + k] = v;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json residuals = nlohmann::ordered_json::object();
    nlohmann::ordered_json tols = nlohmann::ordered_json::object();
    nlohmann::ordered_json flags = nlohmann::ordered_json::object();
    double common_tol = entries_.empty() ? kExactTol : entries_.front().tol;
    bool uniform = true;
    for (const auto& e : entries_) {
      residuals[e.name] = e.value;
      tols[e.name] = e.tol;
      flags[e.name] = e.pass;
      if (e.tol != common_tol) uniform = false;
      if (std::isfinite(e.value_inf)) residuals[e.name + "_inf"] = e.value_inf;
    }
    nlohmann::ordered_json out;
    out["residuals"] = residuals;
    if (uniform)
      out["tolerance"] = common_tol;
    else
      out["tolerance"] = tols;
    out["pass"] = flags;
    if (!stats_.empty()) {
      nlohmann::ordered_json st = nlohmann::ordered_json::object();
      for (const auto& [k, v] : stats_) st[k] = v;
      out["stats"] = st;
    }
    if (!notes_.empty()) out["notes"] = notes_;
    out["verdict"] = passed() ? "pass" : "fail";
    return out;
  }

  std::string to_markdown(const std::string& title) const {
    std::string md = "## " + title + "\n\n";
    md += "| residual | value | tolerance | status |\n|---|---|---|---|\n";
    char buf[64];
    for (const auto& e : entries_) {
      std::snprintf(buf, sizeof buf, "%.3e", e.value);
      md += "| " + e.name + " | " + buf;
      std::snprintf(buf, sizeof buf, "%.1e", e.tol);
      md += " | " + std::string(buf) + " | " + (e.pass ? "pass" : "**fail**") + " |\n";
    }
    for (const auto& [k, v] : stats_) {
      std::snprintf(buf, sizeof buf, "%.6g", v);
      md += "\n- " + k + " = " + buf;
    }
    for (const auto& n : notes_) md += "\n- " + n;
    md += "\n\n**verdict: " + std::string(passed() ? "pass" : "fail") + "**\n";
    return md;
  }

 private:
  std::vector<Entry> entries_;
  std::vector<std::string> notes_;
  std::map<std::string, double> stats_;
};

/// FNV-1a over a string; used to stamp reports with a config fingerprint.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct RunConfig {
  double tol = kExactTol;
  std::uint64_t seed = 1;
  int probes = 64;
  int grid_n = 64;
  double grid_len = 16.0;
  int dense_budget = kDenseBudget;

  void validate() const {
    if (tol <= 0) throw ParameterError("tolerance must be positive");
    if (probes < 1) throw ParameterError("probe count must be >= 1");
    if (grid_len <= 0) throw ParameterError("grid length must be positive");
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["tol"] = tol;
    j["seed"] = seed;
    j["probes"] = probes;
    j["grid_n"] = grid_n;
    j["grid_len"] = grid_len;
    j["dense_budget"] = dense_budget;
    return j;
  }

  std::string hash_hex() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(to_json().dump())));
    return buf;
  }
};

/// Envelope written by the CLI: version + config fingerprint + payload.
inline nlohmann::ordered_json report_envelope(const RunConfig& cfg, nlohmann::ordered_json payload) {
  nlohmann::ordered_json out;
  out["tool"] = "mu";
  out["version"] = kVersion;
  out["config"] = cfg.to_json();
  out["config_hash"] = cfg.hash_hex();
  out["report"] = std::move(payload);
  return out;
}

}  // namespace muw
