#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace wlab {

// Unbounded natural number. Program codes and name positions genuinely
// outgrow machine words (a code can index a name), so the whole numeric
// surface of the library uses one type. Budgets, depths and container
// sizes stay machine-sized.
using nat = boost::multiprecision::cpp_int;

// A finite initial segment of a name.
using Prefix = std::vector<nat>;

inline bool is_prefix_of(const Prefix& w, const Prefix& v) {
  if (w.size() > v.size()) return false;
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] != v[i]) return false;
  return true;
}

std::string show_prefix(const Prefix& w);

// Checked narrowing for positions that are known to be small (window
// offsets, register numbers). Throws std::overflow_error past `bound`.
std::size_t to_index(const nat& n, std::size_t bound);

}  // namespace wlab
