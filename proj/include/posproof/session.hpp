#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "posproof/error.hpp"
#include "posproof/syntax.hpp"

namespace posproof {

/// Mutable state of one pipeline run: the canonical proof variable of each
/// formula and the fresh-name supply. Not shared across threads.
class Session {
 public:
  /// Observer for every expansion step: (function name, input height, output height).
  using Audit = std::function<void(std::string_view, int, int)>;

  Session() = default;

  /// Reserves every variable name of f so that fresh names never collide with it.
  void reserve(const Formula& f) {
    auto n = all_var_names(f);
    used_.insert(n.begin(), n.end());
  }

  /// The canonical variable of a negative formula (c0, c1, ... in registration
  /// order). Formulas are compared by exact syntax.
  std::string canonical_var(const Formula& f) {
    if (!is_negative(f)) throw NotNegative("canonical variables are only assigned to negative formulas: " + to_string(f));
    auto key = to_string(f);
    auto it = registry_.find(key);
    if (it != registry_.end()) return it->second;
    std::string v = "c" + std::to_string(registry_.size());
    registry_.emplace(std::move(key), v);
    return v;
  }

  /// Lookup without registration.
  std::optional<std::string> find_canonical(const Formula& f) const {
    auto it = registry_.find(to_string(f));
    if (it == registry_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t registered() const { return registry_.size(); }

  std::string fresh_term_var(const std::string& base) {
    std::string b = base_name(base);
    int& k = counters_[b];
    std::string n;
    do {
      n = b + std::to_string(++k);
    } while (used_.contains(n));
    used_.insert(n);
    return n;
  }

  std::string fresh_proof_var() { return "a" + std::to_string(next_proof_++); }

  void set_audit(Audit a) { audit_ = std::move(a); }

  void audit(std::string_view fn, int in_height, int out_height) const {
    if (audit_) audit_(fn, in_height, out_height);
  }

 private:
  std::map<std::string, std::string> registry_;
  std::set<std::string> used_;
  std::map<std::string, int> counters_;
  int next_proof_ = 0;
  Audit audit_;
};

}  // namespace posproof
