#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace cechg {

using Id = std::string;

// Malformed description: unknown identifier, duplicate, bad shape.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation applied outside its declared domain.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Enumeration would exceed the configured budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered list of violations; empty means the checked object is valid.
// Issues are appended in a deterministic order by every validator.
struct Report {
  std::vector<std::string> issues;

  bool ok() const { return issues.empty(); }
  void fail(std::string msg) { issues.push_back(std::move(msg)); }
  void merge(const Report& other, const std::string& prefix = "");
  std::string str() const;
};

// Counts elementary checks; charge() throws BudgetError once the limit is hit.
class Budget {
 public:
  explicit Budget(long long limit) : limit_(limit), used_(0) {}

  // Reads CECHG_BUDGET; default 10^7 elementary checks.
  static Budget fromEnv();

  void charge(long long n = 1);
  long long limit() const { return limit_; }
  long long used() const { return used_; }

 private:
  long long limit_;
  long long used_;
};

// Finite ordered set of opaque string identifiers with index lookup.
// Declared order is the iteration order everywhere.
class IndexedSet {
 public:
  IndexedSet() = default;
  explicit IndexedSet(std::vector<Id> names);

  int add(const Id& name);  // SchemaError on duplicate
  int at(const Id& name) const;  // SchemaError on unknown identifier
  int find(const Id& name) const;  // -1 if absent
  bool contains(const Id& name) const { return find(name) >= 0; }
  const Id& name(int idx) const { return names_.at(static_cast<size_t>(idx)); }
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<Id>& names() const { return names_; }

  bool operator==(const IndexedSet& o) const { return names_ == o.names_; }
  bool operator!=(const IndexedSet& o) const { return !(*this == o); }

 private:
  std::vector<Id> names_;
  std::unordered_map<Id, int> index_;
};

std::uint64_t fnv1a(const std::string& data);

}  // namespace cechg
