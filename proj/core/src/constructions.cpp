#include "wlab/constructions.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>

#include "wlab/errors.hpp"
#include "wlab/machine.hpp"

namespace wlab {

namespace {

std::uint64_t budget_at(const nat& j, std::uint64_t budget) {
  if (j >= budget) return budget;
  return static_cast<std::uint64_t>(to_index(j, budget + 1));
}

}  // namespace

Name name_from_tree(const FiniteTree& t) {
  auto members = std::make_shared<std::set<std::string>>(t.members);
  int arity = t.arity;
  return Name(
      [members, arity](const nat& i) -> nat {
        return members->count(word_at(i, arity)) ? 1 : 0;
      },
      nat(2));
}

FiniteTree tree_from_name(const Name& t, int arity, std::size_t depth) {
  FiniteTree out;
  out.arity = arity;
  out.depth = depth;
  if (t(word_index("", arity)) == 0) return out;
  std::vector<std::string> level{""};
  out.members.insert("");
  for (std::size_t d = 0; d < depth && !level.empty(); ++d) {
    std::vector<std::string> next;
    for (const auto& w : level)
      for (int c = 0; c < arity; ++c) {
        std::string child = w + static_cast<char>('0' + c);
        if (t(word_index(child, arity)) != 0) {
          out.members.insert(child);
          next.push_back(std::move(child));
        }
      }
    level = std::move(next);
  }
  return out;
}

Name name_from_family(const CohFamily& f) {
  auto sets = std::make_shared<std::vector<std::vector<bool>>>(f.sets);
  std::size_t window = f.window;
  return Name(
      [sets, window](const nat& pos) -> nat {
        auto [i, j] = cantor_unpair(pos);
        if (i >= sets->size() || j >= window) return 0;
        return (*sets)[to_index(i, sets->size())][to_index(j, window)] ? 1
                                                                       : 0;
      },
      nat(2));
}

CohFamily family_from_name(const Name& f, std::size_t sets,
                           std::size_t window) {
  CohFamily out;
  out.window = window;
  for (std::size_t i = 0; i < sets; ++i) {
    std::vector<bool> row;
    for (std::size_t j = 0; j < window; ++j)
      row.push_back(f(cantor_pair(i, j)) != 0);
    out.sets.push_back(std::move(row));
  }
  return out;
}

Name name_from_dyadics(const std::vector<Rational>& xs, std::size_t prec) {
  const nat scale = nat(1) << prec;
  std::vector<nat> scaled;
  for (const Rational& x : xs) {
    Rational s = x * Rational(scale);
    if (s.denominator() != 1 || s.numerator() < 0 || s.numerator() >= scale)
      throw ContractViolation("value is not a dyadic in [0,1) at precision " +
                              std::to_string(prec));
    scaled.push_back(s.numerator());
  }
  auto nums = std::make_shared<std::vector<nat>>(std::move(scaled));
  return Name(
      [nums, prec](const nat& pos) -> nat {
        auto [j, b] = cantor_unpair(pos);
        if (j >= nums->size() || b >= prec) return 0;
        std::size_t bi = to_index(b, prec);
        return bit_test((*nums)[to_index(j, nums->size())], prec - 1 - bi)
                   ? 1
                   : 0;
      },
      nat(2));
}

std::vector<Rational> dyadics_from_name(const Name& x, std::size_t count,
                                        std::size_t prec) {
  const nat scale = nat(1) << prec;
  std::vector<Rational> out;
  for (std::size_t j = 0; j < count; ++j) {
    nat num = 0;
    for (std::size_t b = 0; b < prec; ++b)
      num = num * 2 + x(cantor_pair(j, b));
    out.emplace_back(num, scale);
  }
  return out;
}

Witness w_dnc_to_paracc(const nat& x, std::size_t tracks) {
  Witness w;
  w.name = "dnc_to_paracc_" + x.str();
  w.strength = Strength::Strong;
  w.inner = Transducer(
      "diagonal watcher", 1,
      [x, tracks](const std::vector<Name>& in, std::uint64_t budget) {
        Name p = in[0];
        nat bound = x + 1;
        return tuple_names([p, x, tracks, budget,
                            bound](const nat& track) -> Name {
          if (track >= tracks) return Name::zeros();
          nat n = track;
          return Name(
              [p, x, n, budget](const nat& j) -> nat {
                RunResult r = diag_approx(p, n, budget_at(j, budget));
                if (!r.halted || r.value >= x) return 0;
                return r.value + 1;
              },
              bound);
        });
      });
  w.outer = identity_transducer();
  return w;
}

nat scanner_index(std::size_t i) {
  static std::map<std::size_t, nat> cache;
  static std::mutex lock;
  std::scoped_lock guard(lock);
  auto it = cache.find(i);
  if (it != cache.end()) return it->second;
  nat code = smn_search(i);
  cache.emplace(i, code);
  return code;
}

Witness w_paracc_to_dnc(const nat& x, std::size_t tracks) {
  Witness w;
  w.name = "paracc_to_dnc_" + x.str();
  w.strength = Strength::Strong;
  w.inner = identity_transducer();
  w.outer = Transducer(
      "scanner composition", 1,
      [tracks](const std::vector<Name>& in, std::uint64_t) {
        Name a = in[0];
        return Name([a, tracks](const nat& i) -> nat {
          if (i >= tracks) return 0;
          return a(scanner_index(to_index(i, tracks)));
        });
      });
  return w;
}

Witness w_dnck_to_wklk(int k, std::size_t depth) {
  Witness w;
  w.name = "dnc" + std::to_string(k) + "_to_wkl" + std::to_string(k);
  w.strength = Strength::Strong;
  w.inner = Transducer(
      "diagonal-avoiding tree", 1,
      [k, depth](const std::vector<Name>& in, std::uint64_t budget) {
        Name p = in[0];
        auto memo = std::make_shared<std::map<std::size_t, RunResult>>();
        return Name(
            [p, k, depth, budget, memo](const nat& wi) -> nat {
              std::string word = word_at(wi, k);
              if (word.size() > depth) return 0;
              for (std::size_t n = 0; n < word.size(); ++n) {
                auto it = memo->find(n);
                if (it == memo->end())
                  it = memo->emplace(n, diag_approx(p, n, budget)).first;
                const RunResult& r = it->second;
                if (r.halted && r.value == word[n] - '0') return 0;
              }
              return 1;
            },
            nat(2));
      });
  w.outer = identity_transducer();
  return w;
}

namespace {

// Extendibility probe over a tree name, memoized for the life of the
// output name it backs.
struct BranchProbe {
  Name tree;
  int k = 2;
  std::size_t depth = 0;
  std::map<std::string, bool> memo;

  bool full(const std::string& w) {
    auto it = memo.find(w);
    if (it != memo.end()) return it->second;
    bool ok = tree(word_index(w, k)) != 0;
    if (ok && w.size() < depth) {
      bool any = false;
      for (int c = 0; c < k && !any; ++c)
        any = full(w + static_cast<char>('0' + c));
      ok = any;
    }
    memo.emplace(w, ok);
    return ok;
  }
};

std::size_t reveal_cost(int k, std::size_t levels_left) {
  // Models the enumeration cost of certifying a dead child: the size of
  // the inspected subtree, capped inside the probing window.
  std::size_t cost = 1;
  for (std::size_t d = 0; d < levels_left; ++d) {
    cost *= static_cast<std::size_t>(k);
    if (cost >= 180) return 180;
  }
  return cost;
}

}  // namespace

Witness w_wklk_to_paracc(int k, std::size_t depth) {
  Witness w;
  w.name = "wkl" + std::to_string(k) + "_to_paracc";
  w.strength = Strength::Strong;
  w.inner = Transducer(
      "dead-child choices", 1,
      [k, depth](const std::vector<Name>& in, std::uint64_t) {
        auto probe = std::make_shared<BranchProbe>();
        probe->tree = in[0];
        probe->k = k;
        probe->depth = depth;
        return tuple_names([probe, k, depth](const nat& track) -> Name {
          return Name(
              [probe, k, depth, track](const nat& j) -> nat {
                std::string w = word_at(track, k);
                if (w.size() >= depth) return 0;
                if (!probe->full(w)) return 0;
                int dead = -1, count = 0;
                for (int c = 0; c < k; ++c)
                  if (!probe->full(w + static_cast<char>('0' + c))) {
                    if (dead < 0) dead = c;
                    ++count;
                  }
                if (count > 1)
                  throw DomainViolation("node " + (w.empty() ? "-" : w) +
                                        " has " + std::to_string(count) +
                                        " dead children");
                if (dead < 0) return 0;
                if (j < reveal_cost(k, depth - w.size() - 1)) return 0;
                return nat(dead + 1);
              },
              nat(k + 1));
        });
      });
  w.outer = Transducer(
      "path assembly", 1,
      [k, depth](const std::vector<Name>& in, std::uint64_t) {
        Name a = in[0];
        return Name(
            [a, k, depth](const nat& i) -> nat {
              if (i >= depth) return 0;
              std::size_t lvl = to_index(i, depth);
              std::string w;
              nat digit = 0;
              for (std::size_t l = 0; l <= lvl; ++l) {
                digit = a(word_index(w, k));
                w += static_cast<char>('0' + to_index(digit, 10));
              }
              return digit;
            },
            nat(k));
      });
  return w;
}

Witness w_accn_to_1swwkl(std::size_t n) {
  Witness w;
  w.name = "accnat_to_wwkl_" + std::to_string(n);
  w.strength = Strength::Strong;
  w.inner = Transducer(
      "excluded-word tree", 1,
      [n](const std::vector<Name>& in, std::uint64_t budget) {
        Name p = in[0];
        return Name(
            [p, n, budget](const nat& wi) -> nat {
              std::string word = word_at(wi, 2);
              if (word.size() > n + 1) return 0;
              auto m = acc_revealed(p, nat(budget));
              if (!m || *m >= (nat(1) << (n + 1))) return 1;
              std::string bad;
              for (std::size_t b = 0; b <= n; ++b)
                bad += bit_test(*m, n - b) ? '1' : '0';
              bool cut = word.size() >= bad.size() &&
                         word.compare(0, bad.size(), bad) == 0;
              return cut ? 0 : 1;
            },
            nat(2));
      });
  w.outer = Transducer(
      "branch decode", 1, [n](const std::vector<Name>& in, std::uint64_t) {
        Name a = in[0];
        return Name([a, n](const nat& i) -> nat {
          if (i != 0) return 0;
          nat v = 0;
          for (std::size_t b = 0; b <= n; ++b) v = v * 2 + a(b);
          return v;
        });
      });
  return w;
}

Witness w_wwkl_parallelize(std::size_t n, std::size_t count,
                           std::size_t depth) {
  (void)n;
  (void)depth;
  Witness w;
  w.name = "wwkl_parallelize";
  w.strength = Strength::Strong;
  w.inner = Transducer(
      "tree intersection", 1,
      [count](const std::vector<Name>& in, std::uint64_t) {
        Name t = in[0];
        return Name(
            [t, count](const nat& wi) -> nat {
              for (std::size_t i = 0; i < count; ++i)
                if (t(cantor_pair(i, wi)) == 0) return 0;
              return 1;
            },
            nat(2));
      });
  w.outer = identity_transducer();
  return w;
}

Witness w_sbwt_to_coh(std::size_t levels, std::size_t prec) {
  (void)prec;
  Witness w;
  w.name = "sbwt_to_coh";
  w.strength = Strength::Strong;
  // Row i collects the sequence elements whose i-th binary digit is 1.
  // Elements on a common side of the first m rows share their first m
  // digits, hence lie within 2^-m of one another.
  w.inner = Transducer(
      "binary digit family", 1,
      [levels](const std::vector<Name>& in, std::uint64_t) {
        Name x = in[0];
        return Name(
            [x, levels](const nat& pos) -> nat {
              auto [i, j] = cantor_unpair(pos);
              if (i >= levels) return 0;
              return x(cantor_pair(j, i));
            },
            nat(2));
      });
  w.outer = identity_transducer();
  return w;
}

Witness w_coh_to_sbwt(std::size_t sets) {
  Witness w;
  w.name = "coh_to_sbwt";
  w.strength = Strength::Strong;
  w.inner = Transducer(
      "digit-vector sequence", 1,
      [sets](const std::vector<Name>& in, std::uint64_t) {
        Name f = in[0];
        return Name(
            [f, sets](const nat& pos) -> nat {
              auto [i, b] = cantor_unpair(pos);
              if (b >= sets) return 0;
              return f(cantor_pair(b, i));
            },
            nat(2));
      });
  w.outer = identity_transducer();
  return w;
}

Witness w_kpt_split() {
  Witness w;
  w.name = "kpt_split";
  w.strength = Strength::Strong;
  w.inner = identity_transducer();
  w.outer = Transducer(
      "pair split", 1, [](const std::vector<Name>& in, std::uint64_t) {
        Name a = in[0];
        return pair_names(project_pair(a, 0), project_pair(a, 1));
      });
  return w;
}

BacktrackResult coh_backtrack(const CohFamily& f, std::size_t budget) {
  std::size_t m = f.sets.size();
  std::size_t stages = std::min(budget, f.window);
  BacktrackResult res;
  struct Tag {
    std::size_t level;
    std::vector<bool> branch;
  };
  std::vector<Tag> tags;
  std::vector<bool> y;
  for (std::size_t s = 1; s <= stages; ++s) {
    y.clear();
    std::vector<std::size_t> live;
    for (std::size_t e = 0; e < s; ++e) live.push_back(e);
    while (y.size() < m) {
      std::vector<std::size_t> in_side, out_side;
      for (std::size_t e : live)
        (f.in(y.size(), e) ? in_side : out_side).push_back(e);
      if (in_side.size() > y.size() + 1) {
        y.push_back(false);
        live = std::move(in_side);
      } else if (out_side.size() > y.size() + 1) {
        y.push_back(true);
        live = std::move(out_side);
      } else {
        break;
      }
    }
    Prefix snapshot;
    for (bool b : y) snapshot.push_back(b ? 1 : 0);
    res.trace.push_back(std::move(snapshot));
    for (std::size_t e : live) {
      if (!res.x.empty() && e <= res.x.back()) continue;
      res.x.push_back(e);
      tags.push_back({y.size(), y});
      break;
    }
  }
  if (y.size() < m)
    throw WindowExhausted("no viable branch of depth " + std::to_string(m) +
                          " within the window");
  std::size_t tail = 0;
  while (tail < tags.size()) {
    const Tag& t = tags[tags.size() - 1 - tail];
    if (t.level != m || t.branch != y) break;
    ++tail;
  }
  if (tail < 2)
    throw WindowExhausted(
        "fewer than 2 emissions certified by the final branch");
  res.slack = res.x.size() - tail;
  res.branch = y;
  return res;
}

namespace {

// Sentinel for reads past the end of a finite word under test.
struct OutOfWord {};

Name word_name(std::shared_ptr<Prefix> z) {
  return Name([z](const nat& idx) -> nat {
    if (idx >= z->size()) throw OutOfWord{};
    return (*z)[to_index(idx, z->size())];
  });
}

// The finite tupling of rows: the longest word z with z(<n,j>) = row n at
// j for every pairing position below its length, cut at the first
// undefined entry.
Prefix tuple_word(const std::vector<Prefix>& rows) {
  Prefix z;
  for (std::size_t d = 0;; ++d) {
    for (std::size_t j = 0; j <= d; ++j) {
      std::size_t n = d - j;
      if (n >= rows.size()) return z;
      const Prefix& row = rows[n];
      if (j >= row.size()) return z;
      z.push_back(row[j]);
    }
  }
}

// Output bits <n, i> for n = 0.. on the finite word z, up to the first
// read past z or the cap.
std::vector<nat> column_bits(const Transducer& g,
                             const std::optional<Name>& q, const Prefix& z,
                             std::size_t i, std::uint64_t budget,
                             std::size_t cap) {
  auto zp = std::make_shared<Prefix>(z);
  Name guarded = word_name(zp);
  Name input = q ? pair_names(*q, guarded) : guarded;
  Name out = g.lift({input}, budget);
  std::vector<nat> bits;
  for (std::size_t n = 0; n < cap; ++n) {
    try {
      bits.push_back(out(cantor_pair(n, i)));
    } catch (const OutOfWord&) {
      break;
    }
  }
  return bits;
}

struct StagePlan {
  std::size_t k_max = 14;
  std::size_t pad_range = 3;   // extra settled symbols granted to new rows
  std::size_t grow_floor = 2;  // minimum row-count search width
  std::size_t cap = 40;        // output column cap
};

Prefix settled_limit(const Name& p, std::size_t width) {
  for (std::size_t horizon : {16, 32, 64, 128, 256}) {
    auto q = lim_window(p, horizon, width);
    if (q) return *q;
  }
  throw WindowExhausted("tuple columns do not settle within the window");
}

// Certify output bit i by the staged test: at threshold k and candidate
// bit b, look for finitely many fresh rows (prefixes of the settled word,
// long enough to determine position i) whose tuple with the committed
// rows makes the transducer emit bit b at least k times among the first
// output columns. Committed rows persist for the coordinate; the answer
// is the bit at the least threshold where exactly one candidate passes.
nat staged_bit(const Transducer& g, const std::optional<Name>& q_param,
               const Prefix& q_true, std::size_t i, std::uint64_t budget,
               const StagePlan& plan) {
  std::vector<Prefix> us;
  for (std::size_t k = 0; k <= plan.k_max; ++k) {
    bool positive[2] = {false, false};
    for (int b = 0; b < 2; ++b) {
      std::size_t j = i + 1 + 2 * k + static_cast<std::size_t>(b);
      std::size_t grow_max = plan.grow_floor;
      if (us.size() < i + k + 4)
        grow_max = std::max(grow_max, i + k + 4 - us.size());
      bool found = false;
      for (std::size_t grow = 1; grow <= grow_max && !found; ++grow) {
        for (std::size_t pad = 0; pad <= plan.pad_range && !found; ++pad) {
          std::size_t ext = std::min(j + pad, q_true.size());
          std::size_t total = us.size() + grow;
          std::vector<Prefix> rows;
          rows.reserve(total);
          for (const Prefix& u : us) {
            Prefix padded = u;
            padded.resize(u.size() + total, nat(0));
            rows.push_back(std::move(padded));
          }
          Prefix fresh(q_true.begin(),
                       q_true.begin() + static_cast<std::ptrdiff_t>(ext));
          for (std::size_t r = us.size(); r < total; ++r)
            rows.push_back(fresh);
          Prefix z = tuple_word(rows);
          std::size_t hits = 0;
          for (const nat& bit :
               column_bits(g, q_param, z, i, budget, plan.cap))
            if (bit == b) ++hits;
          if (hits >= k) {
            found = true;
            for (std::size_t r = 0; r < grow; ++r) us.push_back(fresh);
          }
        }
      }
      positive[b] = found;
    }
    if (positive[0] != positive[1]) return nat(positive[0] ? 0 : 1);
  }
  throw StageBudgetExhausted("no unique bit certified for coordinate " +
                             std::to_string(i));
}

Prefix staged_eval(const Transducer& g, const std::optional<Name>& q,
                   const Name& p, std::size_t bits,
                   std::uint64_t stage_budget) {
  StagePlan plan;
  Prefix q_true =
      settled_limit(p, bits + 2 * plan.k_max + plan.pad_range + 4);
  Prefix out;
  for (std::size_t i = 0; i < bits; ++i)
    out.push_back(staged_bit(g, q, q_true, i, stage_budget, plan));
  return out;
}

Prefix direct_eval(const Transducer& g, const std::optional<Name>& q,
                   const Name& p, std::size_t bits, std::size_t horizon) {
  Prefix q_true = settled_limit(p, 64);
  Name copies = tuple_names(
      [q_true](const nat&) { return Name::from_prefix(q_true, 0); });
  Name input = q ? pair_names(*q, copies) : copies;
  Name out = g.lift({input}, horizon);
  auto settled = lim_window(out, horizon, bits);
  if (!settled) throw WindowExhausted("direct evaluation did not settle");
  return *settled;
}

}  // namespace

Prefix double_limit(const Transducer& g, const Name& p, std::size_t bits,
                    std::uint64_t stage_budget) {
  return staged_eval(g, std::nullopt, p, bits, stage_budget);
}

Prefix param_double_limit(const Transducer& g, const Name& q, const Name& p,
                          std::size_t bits, std::uint64_t stage_budget) {
  return staged_eval(g, q, p, bits, stage_budget);
}

Prefix direct_double_limit(const Transducer& g, const Name& p,
                           std::size_t bits, std::size_t horizon) {
  return direct_eval(g, std::nullopt, p, bits, horizon);
}

Prefix direct_param_double_limit(const Transducer& g, const Name& q,
                                 const Name& p, std::size_t bits,
                                 std::size_t horizon) {
  return direct_eval(g, q, p, bits, horizon);
}

JitResult jit_build(const Prefix& a, std::uint64_t halt_budget) {
  JitResult res;
  Prefix sigma;
  for (std::size_t i = 0; i < a.size(); ++i) {
    // Even stage: length-lex search for an extension making diagonal i
    // halt while reading only the determined prefix.
    bool found = false;
    for (std::size_t len = 0; len <= 6 && !found; ++len) {
      for (std::uint64_t word = 0; word < (1ull << len) && !found; ++word) {
        Prefix cand = sigma;
        for (std::size_t b = 0; b < len; ++b)
          cand.push_back((word >> (len - 1 - b)) & 1);
        RunResult r =
            run(nat(i), nat(i), Name::from_prefix(cand, 0), halt_budget);
        if (r.halted && r.use <= cand.size()) {
          sigma = cand;
          found = true;
        }
      }
    }
    if (found) res.halted.push_back(i);
    res.stages.push_back(sigma);
    // Odd stage: append the source bit.
    sigma.push_back(a[i] == 0 ? nat(0) : nat(1));
    res.stages.push_back(sigma);
  }
  res.word = sigma;
  return res;
}

Prefix hyp_from_wgen(const Prefix& s) {
  Prefix p;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != 0) p.push_back(i);
  if (p.empty()) throw EmptySetError("the enumerated set has no elements");
  return p;
}

Verdict escape_check(const Prefix& r, const Prefix& s) {
  Prefix p;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != 0) p.push_back(i);
  for (std::size_t cut = 0; cut < r.size(); ++cut) {
    std::size_t need = to_index(r[cut], s.size() + 2) + 1;
    if (cut + 1 + need > s.size()) continue;
    bool block = true;
    for (std::size_t z = 0; z < need && block; ++z)
      block = s[cut + 1 + z] == 0;
    if (!block) continue;
    if (cut >= p.size()) continue;
    if (p[cut] <= r[cut])
      return Verdict::no("element " + p[cut].str() + " at rank " +
                         std::to_string(cut) + " does not exceed " +
                         r[cut].str());
  }
  return Verdict::yes();
}

Prefix wgen_from_hyp(const std::vector<WordGen>& gens, const Prefix& q,
                     std::size_t budget) {
  if (q.empty()) throw ContractViolation("the gate sequence is empty");
  std::string sigma(to_index(q[0], 100000), '0');
  for (std::size_t s = 1; s <= budget; ++s) {
    std::size_t qs = to_index(q[std::min(s, q.size() - 1)], 10000000);
    for (std::size_t i = 0; i < gens.size() && i <= s; ++i) {
      bool satisfied = false, extendable = false;
      std::size_t least = 0;
      for (std::size_t jj = 0; jj <= qs; ++jj) {
        std::string word = gens[i](jj);
        if (word.size() <= sigma.size() &&
            sigma.compare(0, word.size(), word) == 0) {
          satisfied = true;
          break;
        }
        if (!extendable && word.size() > sigma.size() &&
            word.compare(0, sigma.size(), sigma) == 0) {
          extendable = true;
          least = jj;
        }
      }
      if (!satisfied && extendable) {
        std::string cand = gens[i](least);
        if (cand.size() <= s + 1) sigma = cand;
        break;
      }
    }
  }
  Prefix out;
  for (char c : sigma) out.push_back(c == '1' ? 1 : 0);
  return out;
}

}  // namespace wlab
