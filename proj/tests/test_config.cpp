#include <stdexcept>

#include "doctest.h"
#include "graphrho/config.hpp"

using namespace graphrho;

TEST_SUITE_BEGIN("config");

TEST_CASE("parses flat key = value text with dotted sections") {
  KVConfig cfg = KVConfig::parse(
      "# comment\n"
      "rho.window_w = 80\n"
      "rho.gamma = 0.6\n"
      "subsolver.kind = heuristic\n"
      "\n"
      "rho.warm_start_learned = true\n");
  CHECK(cfg.get_int("rho.window_w", 0) == 80);
  CHECK(cfg.get_double("rho.gamma", 0) == doctest::Approx(0.6));
  CHECK(cfg.get_string("subsolver.kind", "") == "heuristic");
  CHECK(cfg.get_bool("rho.warm_start_learned", false));
  CHECK(cfg.get_int("missing.key", 42) == 42);
  CHECK(!cfg.has("missing.key"));
}

TEST_CASE("later assignments win; serialize echoes sorted keys") {
  KVConfig cfg = KVConfig::parse("a.b = 1\na.b = 2\nz = x\na.a = 0\n");
  CHECK(cfg.get_int("a.b", 0) == 2);
  CHECK(cfg.serialize() == "a.a = 0\na.b = 2\nz = x\n");
  KVConfig again = KVConfig::parse(cfg.serialize());
  CHECK(again.values() == cfg.values());
}

TEST_CASE("malformed input is rejected with context") {
  CHECK_THROWS_AS(KVConfig::parse("key_without_value\n"), std::runtime_error);
  CHECK_THROWS_AS(KVConfig::parse("= 3\n"), std::runtime_error);
  KVConfig cfg = KVConfig::parse("n = abc\n");
  CHECK_THROWS_AS(cfg.get_int("n", 0), std::runtime_error);
  CHECK_THROWS_AS(cfg.get_bool("n", false), std::runtime_error);
}

TEST_SUITE_END();
