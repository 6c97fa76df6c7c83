#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <stdexcept>

#include "mcloss/parallel.hpp"
#include "mcloss/suites.hpp"

using namespace mcloss;

TEST_CASE("for_each_index visits every index once") {
  for (Execution e : {Execution::Serial, Execution::Parallel}) {
    std::vector<int> hits(1000, 0);
    for_each_index(hits.size(), e, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
  CHECK(parallel_threads() >= 1);
}

TEST_CASE("exceptions from the parallel loop reach the caller") {
  CHECK_THROWS_AS(for_each_index(500, Execution::Parallel,
                                 [](std::size_t i) {
                                   if (i == 317) throw InvalidInput("boom");
                                 }),
                  InvalidInput);
}

TEST_CASE("serial and parallel suites produce identical reports") {
  for (const std::string suite : {"properness", "hinge-order", "pinsker", "general-bound"}) {
    SuiteConfig c;
    c.suite = suite;
    c.m = 3;
    c.samples = 4000;
    c.seed = 5;
    c.exec = Execution::Serial;
    const std::string serial = reports_csv(run_suite(c));
    c.exec = Execution::Parallel;
    CHECK_MESSAGE(reports_csv(run_suite(c)) == serial, suite);
  }
}
