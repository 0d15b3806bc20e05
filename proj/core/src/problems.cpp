#include "wlab/problems.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>

#include "wlab/errors.hpp"
#include "wlab/machine.hpp"

namespace wlab {

Name acc_encode(const AccInstance& inst) {
  if (inst.alphabet && *inst.alphabet < 2)
    throw ContractViolation("choice alphabet must have at least 2 elements");
  if (inst.forbidden && inst.alphabet && *inst.forbidden >= *inst.alphabet)
    throw ContractViolation("forbidden element outside the alphabet");
  if (!inst.forbidden) return Name::zeros();
  nat mark = *inst.forbidden + 1;
  std::size_t reveal = inst.reveal_at;
  return Name([mark, reveal](const nat& i) {
    return i < reveal ? nat(0) : mark;
  });
}

Verdict acc_check(const AccInstance& inst, const nat& output) {
  if (inst.alphabet && output >= *inst.alphabet)
    return Verdict::no("output " + output.str() + " outside alphabet " +
                       inst.alphabet->str());
  if (inst.forbidden && output == *inst.forbidden)
    return Verdict::no("output equals the forbidden element " +
                       inst.forbidden->str());
  return Verdict::yes();
}

std::vector<nat> acc_solutions(const AccInstance& inst, const nat& ceiling) {
  nat bound = inst.alphabet ? *inst.alphabet : ceiling;
  std::vector<nat> out;
  for (nat v = 0; v < bound; ++v)
    if (!inst.forbidden || v != *inst.forbidden) out.push_back(v);
  return out;
}

std::optional<nat> acc_revealed(const Name& p, const nat& probe) {
  nat v = p(probe);
  if (v == 0) return std::nullopt;
  return v - 1;
}

namespace {

// Shared scan cursor: each query advances the scan to its own horizon and
// reads off only what the scan saw strictly below that horizon, so values
// do not depend on the order of queries.
struct TrackScan {
  std::size_t scanned = 0;
  std::optional<nat> hit;
  std::size_t hit_pos = 0;
  std::optional<std::size_t> conflict_pos;
  nat conflict_track;
};

}  // namespace

Name llpo_to_acc(const Name& tracks, const nat& n, std::size_t budget) {
  auto scan = std::make_shared<TrackScan>();
  return Name([tracks, n, budget, scan](const nat& i) -> nat {
    std::size_t horizon = budget;
    if (i < horizon) horizon = to_index(i, budget) + 1;
    while (scan->scanned < horizon) {
      std::size_t m = scan->scanned++;
      if (tracks(m) == 0) continue;
      nat t = cantor_unpair(m).first;
      if (t >= n) continue;
      if (scan->hit && *scan->hit != t && !scan->conflict_pos) {
        scan->conflict_pos = m;
        scan->conflict_track = t;
      }
      if (!scan->hit) {
        scan->hit = t;
        scan->hit_pos = m;
      }
    }
    if (scan->conflict_pos && *scan->conflict_pos < horizon)
      throw DomainViolation("two tracks are nonzero: " + scan->hit->str() +
                            " and " + scan->conflict_track.str());
    if (scan->hit && scan->hit_pos < horizon) return *scan->hit + 1;
    return 0;
  });
}

Name acc_to_llpo(const Name& p, const nat& n, std::size_t budget) {
  // One eager scan; queries then replay the detected exclusion at the
  // position where the scan first saw it.
  std::optional<nat> excluded;
  std::size_t reveal = 0;
  for (std::size_t m = 0; m < budget; ++m) {
    nat v = p(m);
    if (v == 0) continue;
    if (excluded && *excluded != v - 1)
      throw DomainViolation("two exclusions revealed: " + excluded->str() +
                            " and " + nat(v - 1).str());
    if (!excluded) reveal = m;
    excluded = v - 1;
  }
  if (excluded && *excluded >= n)
    throw DomainViolation("exclusion " + excluded->str() +
                          " outside alphabet " + n.str());
  return Name([excluded, reveal](const nat& i) -> nat {
    if (!excluded) return 0;
    auto [t, j] = cantor_unpair(i);
    return (t == *excluded && j >= reveal) ? 1 : 0;
  });
}

FiniteTree FiniteTree::full(int arity, std::size_t depth) {
  FiniteTree t;
  t.arity = arity;
  t.depth = depth;
  std::vector<std::string> level{""};
  for (std::size_t d = 0;; ++d) {
    for (const auto& w : level) t.members.insert(w);
    if (d == depth) break;
    std::vector<std::string> next;
    for (const auto& w : level)
      for (int c = 0; c < arity; ++c)
        next.push_back(w + static_cast<char>('0' + c));
    level = std::move(next);
  }
  return t;
}

void FiniteTree::validate() const {
  if (arity < 2 || arity > 10)
    throw ContractViolation("tree arity must be between 2 and 10");
  for (const auto& w : members) {
    if (w.size() > depth)
      throw ContractViolation("member word '" + w + "' exceeds depth");
    for (char c : w)
      if (c < '0' || c >= '0' + arity)
        throw ContractViolation("member word '" + w +
                                "' has a digit outside the alphabet");
    if (!w.empty() && !contains(w.substr(0, w.size() - 1)))
      throw ContractViolation("member word '" + w + "' lacks its parent");
  }
}

std::vector<Prefix> tree_paths(const FiniteTree& t) {
  std::vector<Prefix> paths;
  for (const auto& w : t.members) {
    if (w.size() != t.depth) continue;
    Prefix p;
    for (char c : w) p.push_back(c - '0');
    paths.push_back(std::move(p));
  }
  return paths;
}

namespace {

// Marks the members that extend to a full-depth branch.
std::map<std::string, bool> extendible(const FiniteTree& t) {
  std::map<std::string, bool> ext;
  std::vector<const std::string*> by_length;
  for (const auto& w : t.members) by_length.push_back(&w);
  std::sort(by_length.begin(), by_length.end(),
            [](const std::string* a, const std::string* b) {
              return a->size() > b->size();
            });
  for (const std::string* w : by_length) {
    if (w->size() == t.depth) {
      ext[*w] = true;
      continue;
    }
    bool any = false;
    for (int c = 0; c < t.arity && !any; ++c) {
      auto it = ext.find(*w + static_cast<char>('0' + c));
      any = it != ext.end() && it->second;
    }
    ext[*w] = any;
  }
  return ext;
}

}  // namespace

bool big_tree_check(const FiniteTree& t) {
  auto ext = extendible(t);
  for (const auto& w : t.members) {
    if (w.size() >= t.depth) continue;
    int dead = 0;
    for (int c = 0; c < t.arity; ++c) {
      auto it = ext.find(w + static_cast<char>('0' + c));
      if (it == ext.end() || !it->second) ++dead;
    }
    if (dead > 1) return false;
  }
  return true;
}

Rational tree_measure(const FiniteTree& t) {
  if (t.arity != 2)
    throw DomainViolation("measure is defined for binary trees only");
  nat leaves = 0;
  for (const auto& w : t.members)
    if (w.size() == t.depth) ++leaves;
  return Rational(leaves, nat(1) << t.depth);
}

FiniteTree tree_intersection(const FiniteTree& a, const FiniteTree& b) {
  if (a.arity != b.arity || a.depth != b.depth)
    throw DomainViolation("intersecting trees of mismatched shape");
  FiniteTree out;
  out.arity = a.arity;
  out.depth = a.depth;
  std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(),
                        b.members.end(),
                        std::inserter(out.members, out.members.begin()));
  return out;
}

nat word_index(const std::string& w, int k) {
  // Words shorter than |w| come first: there are (k^|w| - 1) / (k - 1)
  // of them. Within the length class, order is the base-k value.
  nat power = pow(nat(k), static_cast<unsigned>(w.size()));
  nat first = (power - 1) / (k - 1);
  nat value = 0;
  for (char c : w) value = value * k + (c - '0');
  return first + value;
}

std::string word_at(const nat& n, int k) {
  std::size_t len = 0;
  nat first = 0, count = 1;
  while (first + count <= n) {
    first += count;
    count *= k;
    ++len;
  }
  nat rem = n - first;
  std::string w(len, '0');
  for (std::size_t i = len; i-- > 0;) {
    w[i] = static_cast<char>('0' + static_cast<int>(rem % k));
    rem /= k;
  }
  return w;
}

FiniteTree tree_from_lines(int arity, std::size_t depth,
                           const std::string& text) {
  FiniteTree t;
  t.arity = arity;
  t.depth = depth;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "-") word.clear();
    for (char c : word)
      if (c < '0' || c >= '0' + arity)
        throw ParseError(lineno, "digit out of range in '" + word + "'");
    if (word.size() > depth)
      throw ParseError(lineno, "word '" + word + "' exceeds depth");
    for (std::size_t len = 0; len <= word.size(); ++len)
      t.members.insert(word.substr(0, len));
  }
  return t;
}

std::string tree_to_lines(const FiniteTree& t) {
  std::ostringstream out;
  for (const auto& w : t.members) out << (w.empty() ? "-" : w) << '\n';
  return out.str();
}

CohFamily family_from_lines(const std::string& text) {
  CohFamily f;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string row;
    if (!(ls >> row)) continue;
    std::vector<bool> bits;
    for (char c : row) {
      if (c != '0' && c != '1')
        throw ParseError(lineno, "expected a row of 0/1 bits");
      bits.push_back(c == '1');
    }
    if (!f.sets.empty() && bits.size() != f.window)
      throw ParseError(lineno, "rows have differing lengths");
    f.window = bits.size();
    f.sets.push_back(std::move(bits));
  }
  return f;
}

std::string family_to_lines(const CohFamily& f) {
  std::ostringstream out;
  for (const auto& row : f.sets) {
    for (bool b : row) out << (b ? '1' : '0');
    out << '\n';
  }
  return out.str();
}

Verdict coh_check(const CohFamily& f, const std::vector<std::size_t>& x,
                  std::size_t slack) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] >= f.window)
      throw DomainViolation("element outside the window");
    if (j > 0 && x[j] <= x[j - 1])
      throw DomainViolation("elements must increase strictly");
  }
  if (x.size() < slack + 2)
    return Verdict::no("needs at least " + std::to_string(slack + 2) +
                       " elements at slack " + std::to_string(slack) +
                       ", got " + std::to_string(x.size()));
  for (std::size_t i = 0; i < f.sets.size(); ++i) {
    bool side = f.in(i, x[slack]);
    for (std::size_t j = slack + 1; j < x.size(); ++j)
      if (f.in(i, x[j]) != side)
        return Verdict::no("elements " + std::to_string(x[slack]) + " and " +
                           std::to_string(x[j]) + " straddle set " +
                           std::to_string(i) + " past the slack");
  }
  return Verdict::yes();
}

Verdict dnc_check(const Name& p, const std::optional<nat>& alphabet,
                  const Prefix& q, std::uint64_t budget) {
  for (std::size_t n = 0; n < q.size(); ++n) {
    if (alphabet && q[n] >= *alphabet)
      return Verdict::no("value " + q[n].str() + " at " + std::to_string(n) +
                         " is outside the alphabet");
    RunResult r = diag_approx(p, n, budget);
    if (r.halted && r.value == q[n])
      return Verdict::no("diagonal run " + std::to_string(n) +
                         " halts with the chosen value " + q[n].str());
  }
  return Verdict::yes();
}

}  // namespace wlab
