#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "wlab/nat.hpp"

namespace wlab {

// A point of Baire space at finite budget: a total, deterministic map from
// positions to naturals, queried on demand. Names are immutable once built
// and safe to share between concurrent readers.
class Name {
 public:
  using Fn = std::function<nat(const nat&)>;

  // The all-zero name.
  Name();
  explicit Name(Fn fn, std::optional<nat> alphabet_bound = std::nullopt);

  // Query position i. Enforces the alphabet bound when one is declared.
  nat operator()(const nat& i) const;

  const std::optional<nat>& alphabet_bound() const { return bound_; }

  static Name zeros();
  static Name constant(const nat& v);
  // The stored values, then `fill` from position values.size() on.
  static Name from_prefix(Prefix values, nat fill = 0,
                          std::optional<nat> alphabet_bound = std::nullopt);
  // Caches every answered query. Worth it when single positions are
  // expensive (machine runs behind a name) and consulted repeatedly.
  static Name memoized(Name inner);

  Prefix prefix(std::size_t len) const;

 private:
  std::shared_ptr<const Fn> fn_;
  std::optional<nat> bound_;
};

// The pairing polynomial (n + k + 1)(n + k) / 2 + k, a bijection N^2 -> N.
nat cantor_pair(const nat& n, const nat& k);
std::pair<nat, nat> cantor_unpair(const nat& m);

// Interleaving: result(2k) = p(k), result(2k+1) = q(k).
Name pair_names(const Name& p, const Name& q);
Name project_pair(const Name& pq, int side);

// Countable tupling: result(cantor_pair(i, j)) = ps[i](j). The vector
// overload treats tracks past the end as all-zero.
Name tuple_names(std::vector<Name> ps);
Name tuple_names(std::function<Name(const nat&)> at_track);
Name project_tuple(const Name& t, const nat& i);

// Limit evaluation with stabilization detection. The name is read as a
// tuple <p_0, p_1, ...>; the verdict says whether the first `width`
// coordinates agree across the final quarter of [0, horizon). Stabilized
// is a claim about the inspected window only, never about the true limit.
std::optional<Prefix> lim_window(const Name& p, std::size_t horizon,
                                 std::size_t width);

}  // namespace wlab
