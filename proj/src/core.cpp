#include "cechg/core.hpp"

#include <cstdlib>
#include <sstream>

namespace cechg {

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& issue : other.issues) issues.push_back(prefix + issue);
}

std::string Report::str() const {
  if (ok()) return "ok";
  std::ostringstream out;
  for (size_t i = 0; i < issues.size(); ++i) {
    if (i) out << "\n";
    out << issues[i];
  }
  return out.str();
}

Budget Budget::fromEnv() {
  const char* raw = std::getenv("CECHG_BUDGET");
  long long limit = 10'000'000;
  if (raw != nullptr && *raw != '\0') {
    char* end = nullptr;
    long long parsed = std::strtoll(raw, &end, 10);
    if (end != nullptr && *end == '\0' && parsed > 0) limit = parsed;
  }
  return Budget(limit);
}

void Budget::charge(long long n) {
  used_ += n;
  if (used_ > limit_) {
    throw BudgetError("budget exceeded: " + std::to_string(used_) +
                      " elementary checks requested, limit " +
                      std::to_string(limit_));
  }
}

IndexedSet::IndexedSet(std::vector<Id> names) {
  for (auto& n : names) add(n);
}

int IndexedSet::add(const Id& name) {
  auto [it, inserted] = index_.emplace(name, static_cast<int>(names_.size()));
  if (!inserted) throw SchemaError("duplicate identifier: " + name);
  names_.push_back(name);
  return it->second;
}

int IndexedSet::at(const Id& name) const {
  int idx = find(name);
  if (idx < 0) throw SchemaError("unknown identifier: " + name);
  return idx;
}

int IndexedSet::find(const Id& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace cechg
