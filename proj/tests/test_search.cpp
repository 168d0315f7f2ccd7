#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gibmap/oracle.hpp"
#include "gibmap/search.hpp"
#include "helpers.hpp"

using namespace gibmap;
using gibmap::testing::fixture;
using gibmap::testing::set;

TEST_CASE("initial state pins evidence singletons") {
  Network vee = fixture("vee.json");
  Evidence ev = parse_evidence(vee, {{"C", "t"}});
  SearchState s = initial_state(vee, ev);
  CHECK(s.assignment.get(vee, vee.id_of("C")) == set(vee, "C", {"t"}));
  CHECK(s.assignment.proper_span() == std::vector<int>{vee.id_of("C")});
  CHECK(s.expanded.empty());
  CHECK(s.score == 1.0);

  CHECK_THROWS_AS(parse_evidence(vee, {{"Z", "t"}}), UnknownVariable);
  CHECK_THROWS_AS(parse_evidence(vee, {{"C", "zz"}}), UnknownValue);

  std::vector<std::string> warnings;
  initial_state(vee, {}, &warnings);
  REQUIRE(warnings.size() == 1);  // empty evidence: every explanation is trivial
}

TEST_CASE("node selection follows the child-first index") {
  Network chain = fixture("chain.json");
  Evidence ev = parse_evidence(chain, {{"B", "t"}});
  SearchState s = initial_state(chain, ev);
  REQUIRE(select_node(chain, s));
  CHECK(*select_node(chain, s) == chain.id_of("B"));

  s.expanded.insert(chain.id_of("B"));
  CHECK(!select_node(chain, s).has_value());  // A not properly spanned
}

TEST_CASE("expanding a failing node emits one child per hypercube") {
  Network vee = fixture("vee.json");
  Evidence ev = parse_evidence(vee, {{"C", "t"}});
  SearchState s = initial_state(vee, ev);
  int c = vee.id_of("C");
  auto children = expand(vee, s, c, ev, {});
  REQUIRE(children.size() == 3);
  std::vector<double> scores;
  for (const auto& ch : children) {
    CHECK(ch.expanded.count(c) == 1);
    CHECK(ch.lastExpanded == vee.index_of(c));
    scores.push_back(ch.score);
  }
  std::sort(scores.begin(), scores.end());
  CHECK(scores[0] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(scores[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(scores[2] == doctest::Approx(0.8).epsilon(1e-12));

  // Finish the best child: expanding root A multiplies in P(A=t) = 0.6.
  auto best = std::max_element(children.begin(), children.end(),
                               [](const SearchState& x, const SearchState& y) {
                                 return x.score < y.score;
                               });
  REQUIRE(select_node(vee, *best));
  auto leaves = expand(vee, *best, *select_node(vee, *best), ev, {});
  bool found = false;
  for (const auto& l : leaves)
    if (std::abs(l.score - 0.48) < 1e-12) found = true;
  CHECK(found);

  CHECK_THROWS_AS(expand(vee, s, vee.id_of("A"), ev, {}), NotSelected);
}

TEST_CASE("expanding a node where GIB already holds is a single step") {
  Network chain = fixture("chain.json");
  Evidence ev = parse_evidence(chain, {{"B", "t"}});
  SearchState s = initial_state(chain, ev);
  auto children = expand(chain, s, chain.id_of("B"), ev, {});
  REQUIRE(children.size() == 1);
  CHECK(children[0].score == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(children[0].assignment == s.assignment);
}

TEST_CASE("search on the vee network") {
  Network vee = fixture("vee.json");
  auto out = gib_map_search(vee, parse_evidence(vee, {{"C", "t"}}));
  REQUIRE(out.size() == 1);
  CHECK(out[0].probability == doctest::Approx(0.48).epsilon(1e-12));
  GAssignment want;
  want.assign(vee.id_of("C"), set(vee, "C", {"t"}));
  want.assign(vee.id_of("A"), set(vee, "A", {"t"}));
  CHECK(out[0].assignment == want);
  CHECK(!out[0].experimental);
  CHECK(!out[0].bounds.has_value());
}

TEST_CASE("search on the chain network") {
  Network chain = fixture("chain.json");
  auto out = gib_map_search(chain, parse_evidence(chain, {{"B", "t"}}));
  REQUIRE(out.size() == 1);
  CHECK(out[0].probability == doctest::Approx(0.7).epsilon(1e-12));
  GAssignment want;
  want.assign(chain.id_of("B"), set(chain, "B", {"t"}));
  CHECK(out[0].assignment == want);
}

TEST_CASE("search on the tracks network") {
  Network tracks = fixture("tracks.json");
  auto out = gib_map_search(tracks, parse_evidence(tracks, {{"at-tracks", "T"}}));
  REQUIRE(out.size() == 1);
  CHECK(out[0].probability == doctest::Approx(0.0495).epsilon(1e-12));

  GAssignment want;
  want.assign(tracks.id_of("at-tracks"), set(tracks, "at-tracks", {"T"}));
  want.assign(tracks.id_of("intend-to-go"), set(tracks, "intend-to-go", {"t"}));
  ValueSet sm(tracks.id_of("method"), tracks.domain_size(tracks.id_of("method")));
  for (int i = 1; i <= 99; ++i)
    sm.add(static_cast<std::size_t>(
        tracks.value_index(tracks.id_of("method"), "m" + std::to_string(i))));
  want.assign(tracks.id_of("method"), sm);
  CHECK(out[0].assignment == want);
  // kidnapped stays unconstrained; the disjunction beats any single method.
  CHECK(out[0].assignment.get(tracks, tracks.id_of("kidnapped")).is_full());
}

TEST_CASE("emission order is non-increasing in probability") {
  Network vee = fixture("vee.json");
  SearchOptions opts;
  opts.k = 100;
  auto out = gib_map_search(vee, parse_evidence(vee, {{"C", "t"}}), opts);
  REQUIRE(out.size() >= 2);
  for (std::size_t i = 1; i < out.size(); ++i)
    CHECK(out[i - 1].probability >= out[i].probability - 1e-12);
  // Every emission is a genuine GIB assignment with the exact probability.
  for (const auto& e : out) {
    for (int v : e.assignment.proper_span())
      CHECK(gib_holds_global(vee, e.assignment, v));
    CHECK(e.probability ==
          doctest::Approx(joint_prob_exact(vee, e.assignment)).epsilon(1e-12));
  }
}

TEST_CASE("search matches the brute-force oracle on random networks") {
  RandomNetSpec spec;
  spec.seed = 51;
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    Network net = random_network(spec, static_cast<std::uint64_t>(t));
    int v = static_cast<int>(rng() % static_cast<std::size_t>(net.size()));
    Evidence ev;
    ev[v] = static_cast<int>(rng() % static_cast<std::size_t>(net.domain_size(v)));
    Explanation expect;
    try {
      expect = gib_map_bruteforce(net, ev);
    } catch (const Error&) {
      continue;  // evidence with probability zero
    }
    auto got = gib_map_search(net, ev);
    REQUIRE(got.size() == 1);
    CHECK(got[0].probability ==
          doctest::Approx(expect.probability).epsilon(1e-12));
    CHECK(got[0].assignment == expect.assignment);
  }
}

TEST_CASE("evidence is preserved in every result") {
  Network tracks = fixture("tracks.json");
  Evidence ev = parse_evidence(tracks, {{"at-tracks", "T"}, {"kidnapped", "f"}});
  SearchOptions opts;
  opts.k = 5;
  auto out = gib_map_search(tracks, ev, opts);
  REQUIRE(!out.empty());
  for (const auto& e : out)
    for (const auto& [v, val] : ev)
      CHECK(e.assignment.get(tracks, v) ==
            ValueSet::single(v, tracks.domain_size(v), static_cast<std::size_t>(val)));
}

TEST_CASE("relaxed search brackets the probability") {
  Network dep = fixture("dep.json");
  SearchOptions opts;
  opts.delta = 0.8;
  auto out = gib_map_search(dep, parse_evidence(dep, {{"B", "t"}}), opts);
  REQUIRE(!out.empty());
  CHECK(out[0].experimental);
  REQUIRE(out[0].bounds.has_value());
  CHECK(out[0].bounds->lo <= out[0].probability + 1e-12);
  CHECK(out[0].probability <= out[0].bounds->hi + 1e-12);
  double exact = joint_prob_exact(dep, out[0].assignment);
  CHECK(out[0].bounds->lo <= exact + 1e-12);
  CHECK(exact <= out[0].bounds->hi + 1e-12);
}

TEST_CASE("identical runs are identical") {
  Network tracks = fixture("tracks.json");
  Evidence ev = parse_evidence(tracks, {{"at-tracks", "T"}});
  SearchOptions opts;
  opts.k = 3;
  std::vector<std::string> t1, t2;
  SearchOptions o1 = opts, o2 = opts;
  o1.trace = &t1;
  o2.trace = &t2;
  auto a = gib_map_search(tracks, ev, o1);
  auto b = gib_map_search(tracks, ev, o2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].assignment == b[i].assignment);
    CHECK(a[i].probability == b[i].probability);
  }
  CHECK(t1 == t2);
  CHECK(!t1.empty());
}
