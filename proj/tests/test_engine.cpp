#include <doctest.h>

#include <cstdlib>
#include <random>

#include "oracles.hpp"
#include "relaycast/engine.hpp"
#include "relaycast/errors.hpp"

using namespace relaycast;

namespace {

EngineConfig k4_config(const Graph& g, std::size_t th_x, std::size_t th_y, Round k_max) {
  EngineConfig c;
  c.graph = &g;
  c.initiation.I0 = {0};
  c.initiation.k0 = 0;
  c.excitation_threshold = th_x;
  c.trigger_threshold = th_y;
  c.k_max = k_max;
  return c;
}

std::vector<std::uint8_t> x_row(const Trace& t, Round k) {
  std::vector<std::uint8_t> r(t.n());
  for (NodeId i = 0; i < t.n(); ++i) r[i] = t.x(k, i);
  return r;
}

using Row = std::vector<std::uint8_t>;

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("fault-free K4 excites and triggers everyone at round 1") {
    const Graph k4 = make_complete(4);
    ProtocolParams p;
    p.beta = p.beta2 = 0.3;
    const Trace t = run(k4_config(k4, p.excitation_threshold(3), p.pure_trigger_threshold(3), 4));
    CHECK(x_row(t, 0) == Row{1, 0, 0, 0});
    CHECK(x_row(t, 1) == Row{1, 1, 1, 1});
    for (NodeId i = 0; i < 4; ++i) {
      CHECK(t.y_rise(i) == 1);
      CHECK(t.x(4, i) == 1);
    }
    CHECK(t.u(0, 0) == 1);
    CHECK(t.u(1, 0) == 0);
    CHECK(growth_check(t, 0.0).empty());
  }

  TEST_CASE("no initiation and no faults stays silent") {
    const Graph g = build_random_regular(64, 6, 2);
    EngineConfig c;
    c.graph = &g;
    c.k_max = 20;
    c.excitation_threshold = 1;
    c.trigger_threshold = 1;
    const Trace t = run(c);
    for (NodeId i = 0; i < g.n(); ++i) {
      CHECK(t.x_rise(i) == kNever);
      CHECK(t.y_rise(i) == kNever);
    }
  }

  TEST_CASE("faulty general with no bits delivers nothing") {
    const Graph k4 = make_complete(4);
    EngineConfig c = k4_config(k4, 1, 1, 5);
    c.initiation.general_correct = false;
    const Trace t = run(c);
    for (NodeId i = 0; i < 4; ++i) CHECK(t.x_rise(i) == kNever);
  }

  TEST_CASE("split-half equivocation on K4") {
    // Node 3 is faulty and shows 1 only to node 1 (position 1 of {0,1,2}).
    const Graph k4 = make_complete(4);
    EngineConfig c = k4_config(k4, ProtocolParams{0.6}.excitation_threshold(3), 3, 4);
    CHECK(c.excitation_threshold == 2);
    c.faults = {3};
    c.script.kind = ScriptKind::split_half;
    const Trace t = run(c);
    CHECK(t.x(1, 1) == 1);
    CHECK(t.x(1, 2) == 0);
    CHECK(t.x(2, 2) == 1);
    CHECK_FALSE(t.correct(3));
  }

  TEST_CASE("script bits") {
    const Graph k4 = make_complete(4);
    AdversaryScript s;
    s.kind = ScriptKind::flicker;
    CHECK(*s.bit(k4, 3, 1, 2, 0) == 1);
    CHECK(*s.bit(k4, 3, 2, 2, 0) == 0);
    CHECK(*s.bit(k4, 3, 2, -1, 1) == 0);
    s.kind = ScriptKind::honest;
    CHECK(*s.bit(k4, 3, 2, 4, 1) == 1);
    s.kind = ScriptKind::custom_table;
    s.table[{3, 2, 4}] = 1;
    CHECK(*s.bit(k4, 3, 2, 4, 0) == 1);
    CHECK_FALSE(s.bit(k4, 3, 1, 4, 0).has_value());
    CHECK(parse_script_kind("split-half") == ScriptKind::split_half);
    CHECK_THROWS_AS(parse_script_kind("loud"), ValidationError);
  }

  TEST_CASE("custom table with a missing entry is an execution error") {
    const Graph k4 = make_complete(4);
    // An unreachable trigger threshold keeps the run from settling early.
    EngineConfig c = k4_config(k4, 1, 5, 3);
    c.faults = {3};
    c.script.kind = ScriptKind::custom_table;
    for (NodeId i = 0; i < 3; ++i) c.script.table[{3, i, 0}] = 0;
    CHECK_THROWS_AS(run(c), ExecutionError);
    for (NodeId i = 0; i < 3; ++i) {
      for (Round k = 1; k < 3; ++k) c.script.table[{3, i, k}] = 1;
    }
    CHECK_NOTHROW(run(c));
  }

  TEST_CASE("config validation") {
    const Graph k4 = make_complete(4);
    EngineConfig c = k4_config(k4, 1, 1, 3);
    c.initiation.bits = {1, 0};
    CHECK_THROWS_AS(run(c), ValidationError);
    c.initiation.bits.clear();
    c.initiation.k0 = 5;
    CHECK_THROWS_AS(run(c), ValidationError);
    c.initiation.k0 = 0;
    c.mode = TriggerMode::complementary;
    CHECK_THROWS_AS(run(c), ConfigError);
  }

  TEST_CASE("fault-free dynamics match bootstrap percolation") {
    std::mt19937_64 gen(31337);
    int graphs = 0;
    while (graphs < 100) {
      const std::size_t n = 6 + gen() % 59;
      const std::size_t d = 3 + gen() % std::min<std::size_t>(n - 3, 12);
      const auto g = oracle::random_regular(n, d, gen);
      if (!g) continue;
      ++graphs;
      const std::size_t threshold = 1 + gen() % (d / 2 + 1);
      std::set<NodeId> seeds;
      const std::size_t m = 1 + gen() % (n / 4 + 1);
      while (seeds.size() < m) seeds.insert(static_cast<NodeId>(gen() % n));
      const Round k0 = static_cast<Round>(gen() % 3);
      const Round k_max = k0 + static_cast<Round>(n);

      EngineConfig c;
      c.graph = &*g;
      c.initiation.I0 = NodeSet(seeds.begin(), seeds.end());
      c.initiation.k0 = k0;
      c.excitation_threshold = threshold;
      c.trigger_threshold = d + 1;
      c.k_max = k_max;
      const Trace t = run(c);
      const auto expect = oracle::percolation(*g, seeds, k0, threshold, k_max);
      for (Round k = 0; k <= k_max; ++k) {
        for (NodeId i = 0; i < n; ++i) REQUIRE(t.x(k, i) == expect[static_cast<std::size_t>(k)].count(i));
      }
    }
  }

  TEST_CASE("monotone latching and correct-row fidelity") {
    const Graph g = build_random_regular(128, 8, 4);
    for (auto kind : {ScriptKind::silent, ScriptKind::blast, ScriptKind::split_half, ScriptKind::flicker,
                      ScriptKind::honest}) {
      EngineConfig c;
      c.graph = &g;
      c.faults = {3, 17, 40, 90};
      c.script.kind = kind;
      c.initiation.I0 = {0, 1, 2};
      c.excitation_threshold = 3;
      c.trigger_threshold = 5;
      c.k_max = 30;
      Engine e(c);
      std::vector<std::uint8_t> px(g.n(), 0), py(g.n(), 0);
      while (!e.done()) {
        e.step();
        for (NodeId i = 0; i < g.n(); ++i) {
          CHECK(e.x()[i] >= px[i]);
          CHECK(e.y()[i] >= py[i]);
        }
        px.assign(e.x().begin(), e.x().end());
        py.assign(e.y().begin(), e.y().end());
      }
    }
    // Without faults, an honest script changes nothing.
    EngineConfig a;
    a.graph = &g;
    a.initiation.I0 = {5};
    a.excitation_threshold = 2;
    a.trigger_threshold = 3;
    a.k_max = 25;
    EngineConfig b = a;
    b.faults = {9};
    b.script.kind = ScriptKind::honest;
    Trace ta = run(a), tb = run(b);
    for (NodeId i = 0; i < g.n(); ++i) {
      if (i == 9) continue;
      CHECK(ta.x_rise(i) == tb.x_rise(i));
      CHECK(ta.y_rise(i) == tb.y_rise(i));
    }
  }

  TEST_CASE("serial and parallel backends agree bit for bit") {
    setenv("RELAYCAST_WORKERS", "4", 1);
    const Graph g = build_random_regular(1024, 32, 1);
    for (auto kind : {ScriptKind::blast, ScriptKind::split_half, ScriptKind::flicker}) {
      EngineConfig c;
      c.graph = &g;
      c.faults = {1, 100, 200, 300, 400, 500};
      c.script.kind = kind;
      c.initiation.I0 = {0, 2, 3, 4, 5, 6, 7, 8};
      c.excitation_threshold = 8;
      c.trigger_threshold = 12;
      c.k_max = 40;
      c.backend = Backend::serial;
      const Trace s = run(c);
      c.backend = Backend::openmp;
      const Trace p = run(c);
      CHECK(s == p);
      CHECK(s == run(c));
    }
    unsetenv("RELAYCAST_WORKERS");
  }

  TEST_CASE("growth check") {
    Trace t(4, 5);
    t.meta.partition.P = {0, 1, 2, 3};
    t.set_x_rise(0, 0);
    t.set_y_rise(0, 1);
    CHECK(growth_check(t, 0.0) == std::vector<Round>{1, 2, 3, 4});
    // With the poor allowance covering the missing nodes, one excited node is saturation.
    CHECK(growth_check(t, 3.0).empty());
    for (NodeId i = 1; i < 4; ++i) t.set_x_rise(i, static_cast<Round>(i + 1));
    CHECK(growth_check(t, 0.0).empty());
    Trace quiet(4, 5);
    quiet.meta.partition.P = {0, 1, 2, 3};
    CHECK(growth_check(quiet, 0.0).empty());
  }
}
