#include "wlab/names.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "wlab/errors.hpp"

namespace wlab {

std::string show_prefix(const Prefix& w) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out << ',';
    out << w[i];
  }
  out << ']';
  return out.str();
}

std::size_t to_index(const nat& n, std::size_t bound) {
  if (n >= bound)
    throw std::overflow_error("position " + n.str() + " exceeds bound " +
                              std::to_string(bound));
  return n.convert_to<std::size_t>();
}

Name::Name() : Name([](const nat&) { return nat(0); }) {}

Name::Name(Fn fn, std::optional<nat> alphabet_bound)
    : fn_(std::make_shared<const Fn>(std::move(fn))),
      bound_(std::move(alphabet_bound)) {}

nat Name::operator()(const nat& i) const {
  nat v = (*fn_)(i);
  if (bound_ && v >= *bound_)
    throw ContractViolation("name value " + v.str() + " breaks alphabet bound " +
                            bound_->str());
  return v;
}

Name Name::zeros() { return Name(); }

Name Name::constant(const nat& v) {
  return Name([v](const nat&) { return v; });
}

Name Name::from_prefix(Prefix values, nat fill,
                       std::optional<nat> alphabet_bound) {
  auto data = std::make_shared<const Prefix>(std::move(values));
  return Name(
      [data, fill](const nat& i) {
        if (i < data->size()) return (*data)[i.convert_to<std::size_t>()];
        return fill;
      },
      std::move(alphabet_bound));
}

Name Name::memoized(Name inner) {
  struct Cache {
    std::mutex mu;
    std::map<nat, nat> seen;
  };
  auto cache = std::make_shared<Cache>();
  auto bound = inner.alphabet_bound();
  return Name(
      [inner = std::move(inner), cache](const nat& i) {
        {
          std::lock_guard<std::mutex> lock(cache->mu);
          auto it = cache->seen.find(i);
          if (it != cache->seen.end()) return it->second;
        }
        nat v = inner(i);
        std::lock_guard<std::mutex> lock(cache->mu);
        return cache->seen.emplace(i, std::move(v)).first->second;
      },
      bound);
}

Prefix Name::prefix(std::size_t len) const {
  Prefix out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) out.push_back((*this)(nat(i)));
  return out;
}

nat cantor_pair(const nat& n, const nat& k) {
  nat s = n + k;
  return (s + 1) * s / 2 + k;
}

std::pair<nat, nat> cantor_unpair(const nat& m) {
  // Recover the diagonal s = n + k as the largest s with s(s+1)/2 <= m,
  // then read k off the remainder.
  nat twice = 2 * m;
  nat s = boost::multiprecision::sqrt(twice);
  while ((s + 1) * s / 2 > m) --s;
  while ((s + 2) * (s + 1) / 2 <= m) ++s;
  nat k = m - (s + 1) * s / 2;
  return {s - k, k};
}

Name pair_names(const Name& p, const Name& q) {
  return Name([p, q](const nat& i) {
    nat j = i / 2;
    return (i % 2 == 0) ? p(j) : q(j);
  });
}

Name project_pair(const Name& pq, int side) {
  return Name([pq, side](const nat& j) { return pq(2 * j + side); });
}

Name tuple_names(std::vector<Name> ps) {
  auto tracks = std::make_shared<const std::vector<Name>>(std::move(ps));
  return tuple_names([tracks](const nat& i) {
    if (i < tracks->size()) return (*tracks)[i.convert_to<std::size_t>()];
    return Name::zeros();
  });
}

Name tuple_names(std::function<Name(const nat&)> at_track) {
  auto at = std::make_shared<const std::function<Name(const nat&)>>(
      std::move(at_track));
  return Name([at](const nat& m) {
    auto [i, j] = cantor_unpair(m);
    return (*at)(i)(j);
  });
}

Name project_tuple(const Name& t, const nat& i) {
  return Name([t, i](const nat& j) { return t(cantor_pair(i, j)); });
}

std::optional<Prefix> lim_window(const Name& p, std::size_t horizon,
                                 std::size_t width) {
  if (horizon == 0) return std::nullopt;
  std::size_t start = horizon - std::max<std::size_t>(1, horizon / 4);
  Prefix common;
  for (std::size_t n = start; n < horizon; ++n) {
    Name pn = project_tuple(p, nat(n));
    Prefix w = pn.prefix(width);
    if (n == start) {
      common = std::move(w);
    } else if (w != common) {
      return std::nullopt;
    }
  }
  return common;
}

}  // namespace wlab
