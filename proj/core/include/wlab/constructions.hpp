#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "wlab/names.hpp"
#include "wlab/nat.hpp"
#include "wlab/problems.hpp"
#include "wlab/witnesses.hpp"

namespace wlab {

// Conversions between finite problem instances and their name encodings.
// Trees use the length-lex word bijection (position word_index(w, arity),
// value 0/1); families and dyadic sequences use pair positions (row, col).
Name name_from_tree(const FiniteTree& t);
FiniteTree tree_from_name(const Name& t, int arity, std::size_t depth);
Name name_from_family(const CohFamily& f);
CohFamily family_from_name(const Name& f, std::size_t sets,
                           std::size_t window);
// x_j in [0,1] with denominator 2^prec, encoded bitwise: position (j, b)
// holds bit b of the binary expansion of x_j.
Name name_from_dyadics(const std::vector<Rational>& xs, std::size_t prec);
std::vector<Rational> dyadics_from_name(const Name& x, std::size_t count,
                                        std::size_t prec);

// Witnesses for the parallelized-choice characterization of diagonal
// avoidance, both directions strong. The forward inner transducer turns an
// oracle into `tracks` choice instances by watching the diagonal runs; the
// backward outer composes the answer with the scanner program index.
Witness w_dnc_to_paracc(const nat& x, std::size_t tracks);
Witness w_paracc_to_dnc(const nat& x, std::size_t tracks);

// Cached scanner code for track i (the backward witness consults it on
// every answer coordinate).
nat scanner_index(std::size_t i);

// Diagonal avoidance versus depth-capped k-ary trees with at most one
// dead child per node.
Witness w_dnck_to_wklk(int k, std::size_t depth);
Witness w_wklk_to_paracc(int k, std::size_t depth);

// Unbounded choice into positive-measure tree choice: the full depth-(n+1)
// binary tree minus the subtree of the revealed element's code word.
Witness w_accn_to_1swwkl(std::size_t n);

// Intersection of `count` trees with measure > 1 - 2^{-(n+k+1)} each; the
// result exceeds 1 - 2^{-n} strictly.
Witness w_wwkl_parallelize(std::size_t n, std::size_t count,
                           std::size_t depth);

// Bounded-sequence convergence versus cohesion, via dyadic interval
// families (forward) and digit-vector sequences (backward).
Witness w_sbwt_to_coh(std::size_t levels, std::size_t prec);
Witness w_coh_to_sbwt(std::size_t sets);

// The trivial pair splitter; only the transducer contracts are checkable.
Witness w_kpt_split();

// Left-most branch of the viability tree {y : |R^y| > |y|} over a finite
// window, with backtracking. Emits one element per stage when possible,
// keeps the full revision trace, and reports how many leading emissions
// were invalidated (the slack).
struct BacktrackResult {
  std::vector<Prefix> trace;       // branch after each stage
  std::vector<std::size_t> x;      // emitted elements, increasing
  std::size_t slack = 0;           // emissions not certified by the branch
  std::vector<bool> branch;        // final branch, one side per set
};
BacktrackResult coh_backtrack(const CohFamily& f, std::size_t budget);

// Limit-of-limits evaluation: stage algorithm deciding each output bit by
// a bounded search for extension tuples on which the transducer's output
// column shows a bit at least k times, taking the minimal k where exactly
// one bit testifies. p is a tuple name whose columns settle inside the
// window. Throws StageBudgetExhausted when no bit resolves and
// WindowExhausted when p's columns do not settle.
Prefix double_limit(const Transducer& g, const Name& p, std::size_t bits,
                    std::uint64_t stage_budget);
// Parameterized variant: g reads the pair (q, tuple); the search consults
// q directly.
Prefix param_double_limit(const Transducer& g, const Name& q, const Name& p,
                          std::size_t bits, std::uint64_t stage_budget);
// The independent check: evaluate g on the canonical constant-copy tuple
// of p's settled value and read the settled output columns.
Prefix direct_double_limit(const Transducer& g, const Name& p,
                           std::size_t bits, std::size_t horizon);
Prefix direct_param_double_limit(const Transducer& g, const Name& q,
                                 const Name& p, std::size_t bits,
                                 std::size_t horizon);

// Finite-extension construction interleaving "make diagonal i halt" even
// stages (length-lex search, bounded) with "append the next source bit"
// odd stages.
struct JitResult {
  Prefix word;                  // final binary word
  std::vector<Prefix> stages;   // word after each stage, 2|a| entries
  std::vector<std::size_t> halted;  // codes whose even stage succeeded
};
JitResult jit_build(const Prefix& a, std::uint64_t halt_budget);

// Principal function of s^{-1}{1} (strictly increasing positions of ones).
Prefix hyp_from_wgen(const Prefix& s);
// Checks the escape inequality: wherever s starts with a block w followed
// by r(|w|)+1 zeros, the principal function exceeds r at |w|.
Verdict escape_check(const Prefix& r, const Prefix& s);

// Finite-injury construction of a word meeting every generator that stays
// dense along the construction; f_i(j) enumerates binary words, q gates
// how much of each enumeration stage s may see.
using WordGen = std::function<std::string(std::size_t)>;
Prefix wgen_from_hyp(const std::vector<WordGen>& gens, const Prefix& q,
                     std::size_t budget);

// Installs every named verification suite (idempotent).
void register_builtin_witnesses();

}  // namespace wlab
