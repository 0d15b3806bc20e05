#include <random>

#include "doctest.h"
#include "wlab/errors.hpp"
#include "wlab/names.hpp"

using namespace wlab;

namespace {

nat rand_below(std::mt19937_64& rng, std::uint64_t n) {
  return nat(rng() % n);
}

}  // namespace

TEST_CASE("name basics") {
  CHECK(Name::zeros()(0) == 0);
  CHECK(Name::zeros()(nat(1) << 100) == 0);
  CHECK(Name::constant(5)(99) == 5);

  Name p = Name::from_prefix({3, 1, 4}, 7);
  CHECK(p(0) == 3);
  CHECK(p(1) == 1);
  CHECK(p(2) == 4);
  CHECK(p(3) == 7);
  CHECK(p(1000) == 7);
  CHECK(p.prefix(5) == Prefix{3, 1, 4, 7, 7});
}

TEST_CASE("alphabet bound is enforced at query time") {
  Name ok = Name::from_prefix({0, 1, 1, 0}, 0, 2);
  for (int i = 0; i < 8; ++i) CHECK(ok(i) < 2);

  Name bad([](const nat& i) { return i; }, 2);
  CHECK(bad(1) == 1);
  CHECK_THROWS_AS(bad(2), ContractViolation);
}

TEST_CASE("memoized names answer like the original") {
  int calls = 0;
  Name slow([&calls](const nat& i) {
    ++calls;
    return i * i;
  });
  Name fast = Name::memoized(slow);
  CHECK(fast(6) == 36);
  CHECK(fast(6) == 36);
  CHECK(fast(9) == 81);
  CHECK(calls == 2);
}

TEST_CASE("cantor pairing examples") {
  CHECK(cantor_pair(0, 0) == 0);
  CHECK(cantor_pair(1, 0) == 1);
  CHECK(cantor_pair(0, 1) == 2);
  CHECK(cantor_pair(2, 0) == 3);
  CHECK(cantor_pair(1, 1) == 4);
  CHECK(cantor_pair(0, 2) == 5);
  CHECK(cantor_pair(3, 0) == 6);
  CHECK(cantor_unpair(0) == std::pair<nat, nat>(0, 0));
  CHECK(cantor_unpair(2) == std::pair<nat, nat>(0, 1));
  CHECK(cantor_unpair(4) == std::pair<nat, nat>(1, 1));
}

TEST_CASE("cantor pairing is a bijection") {
  for (int n = 0; n < 256; ++n)
    for (int k = 0; k < 256; ++k)
      CHECK(cantor_unpair(cantor_pair(n, k)) == std::pair<nat, nat>(n, k));
  for (int m = 0; m < 65536; ++m) {
    auto [n, k] = cantor_unpair(m);
    CHECK(cantor_pair(n, k) == m);
  }
}

TEST_CASE("cantor pairing handles big inputs") {
  nat n = nat(1) << 200;
  nat k = (nat(1) << 150) + 17;
  CHECK(cantor_unpair(cantor_pair(n, k)) == std::pair<nat, nat>(n, k));
}

TEST_CASE("pair interleaves and projects back") {
  Name p([](const nat& i) { return 10 * i; });
  Name q = Name::constant(9);
  Name pq = pair_names(p, q);
  std::mt19937_64 rng(2026);
  for (int t = 0; t < 1000; ++t) {
    nat k = rand_below(rng, 1 << 20);
    CHECK(pq(2 * k) == p(k));
    CHECK(pq(2 * k + 1) == q(k));
    CHECK(project_pair(pq, 0)(k) == p(k));
    CHECK(project_pair(pq, 1)(k) == q(k));
  }
}

TEST_CASE("tuple places track i at the paired positions") {
  std::vector<Name> ps;
  for (int i = 0; i < 6; ++i)
    ps.push_back(Name([i](const nat& j) { return nat(i) * 100 + j; }));
  Name t = tuple_names(ps);
  std::mt19937_64 rng(2027);
  for (int trial = 0; trial < 1000; ++trial) {
    nat i = rand_below(rng, 9);
    nat j = rand_below(rng, 1 << 16);
    nat want = i < 6 ? ps[static_cast<std::size_t>(i)](j) : nat(0);
    CHECK(t(cantor_pair(i, j)) == want);
    CHECK(project_tuple(t, i)(j) == want);
  }
}

TEST_CASE("functional tuple matches its track function") {
  Name t = tuple_names(
      [](const nat& i) { return Name([i](const nat& j) { return i + j; }); });
  std::mt19937_64 rng(2028);
  for (int trial = 0; trial < 1000; ++trial) {
    nat i = rand_below(rng, 1 << 10);
    nat j = rand_below(rng, 1 << 10);
    CHECK(project_tuple(t, i)(j) == i + j);
  }
}

TEST_CASE("window limit at horizon zero is undecided") {
  CHECK(!lim_window(Name::zeros(), 0, 3).has_value());
}

TEST_CASE("window limit on constant tracks stabilizes") {
  Name t = tuple_names([](const nat&) { return Name::constant(7); });
  auto got = lim_window(t, 16, 3);
  REQUIRE(got.has_value());
  CHECK(*got == Prefix{7, 7, 7});
}

TEST_CASE("window limit sees alternating tracks as unstable") {
  Name t = tuple_names([](const nat& n) { return Name::constant(n % 2); });
  CHECK(!lim_window(t, 16, 1).has_value());
  CHECK(!lim_window(t, 64, 1).has_value());
}

TEST_CASE("window limit needs the window past the junk") {
  Prefix target{4, 0, 9};
  Name t = tuple_names([&target](const nat& n) {
    if (n < 20) return Name::constant(n + 1);
    return Name::from_prefix(target);
  });
  // Horizon 24 inspects tracks [18, 24), which still straddles the junk.
  CHECK(!lim_window(t, 24, 3).has_value());
  auto got = lim_window(t, 40, 3);
  REQUIRE(got.has_value());
  CHECK(*got == Prefix{4, 0, 9});
}

TEST_CASE("window limit stays stabilized on eventually constant names") {
  std::mt19937_64 rng(2029);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n0 = static_cast<std::size_t>(rng() % 30);
    Prefix target;
    for (int w = 0; w < 4; ++w) target.push_back(rand_below(rng, 10));
    Name t = tuple_names([n0, &target](const nat& n) {
      if (n < n0) return Name::constant(target[0] + 1 + n);
      return Name::from_prefix(target);
    });
    for (std::size_t h = 2 * n0 + 4; h < 2 * n0 + 40; h += 7) {
      auto got = lim_window(t, h, 4);
      REQUIRE(got.has_value());
      CHECK(*got == target);
    }
  }
}
