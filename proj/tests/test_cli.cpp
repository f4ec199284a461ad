// Copyright (c) the hpbem authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hpbem/cli.hpp"

using namespace hpbem;

namespace {

std::string slurp(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("validation failures exit with code 1")
{
  CHECK(run({"infsup", "--pmax", "0", "--out", "/tmp/hpbem_t0.csv"}) == 1);
  CHECK(run({"infsup", "--pmax", "99", "--out", "/tmp/hpbem_t0.csv"}) == 1);
  CHECK(run({"no-such-command"}) == 1);
  CHECK(run({"efie-solve", "--degree", "0", "--out", "/tmp/hpbem_t0.csv"}) == 1);
  CHECK(run({"interp-stability", "--family", "bogus", "--out", "/tmp/hpbem_t0.csv"}) == 1);
}

TEST_CASE("config file overrides flags; unknown keys rejected")
{
  {
    std::ofstream cfg("/tmp/hpbem_cfg.json");
    cfg << "{\"pmax\": 3, \"out\": \"/tmp/hpbem_cfg_out.csv\"}";
  }
  CHECK(run({"infsup", "--pmax", "5", "--out", "/tmp/ignored.csv", "--config",
             "/tmp/hpbem_cfg.json"}) == 0);
  const std::string text = slurp("/tmp/hpbem_cfg_out.csv");
  CHECK(text.find("\n3,") != std::string::npos);  // config pmax honored
  CHECK(text.find("\n5,") == std::string::npos);  // flag value overridden

  {
    std::ofstream cfg("/tmp/hpbem_cfg_bad.json");
    cfg << "{\"nonsense\": 1}";
  }
  CHECK(run({"infsup", "--config", "/tmp/hpbem_cfg_bad.json", "--out", "/tmp/hpbem_t1.csv"}) == 1);
}

TEST_CASE("infsup subcommand asserts its tolerance and is deterministic")
{
  CHECK(run({"infsup", "--pmin", "1", "--pmax", "5", "--assert", "--out",
             "/tmp/hpbem_infsup_a.csv"}) == 0);
  CHECK(run({"infsup", "--pmin", "1", "--pmax", "5", "--assert", "--out",
             "/tmp/hpbem_infsup_b.csv"}) == 0);
  CHECK(slurp("/tmp/hpbem_infsup_a.csv") == slurp("/tmp/hpbem_infsup_b.csv"));
  const std::string text = slurp("/tmp/hpbem_infsup_a.csv");
  CHECK(text.rfind("p,computed,closed_form,abs_err", 0) == 0);
  CHECK(text.find("1,trivial,1,na") != std::string::npos);
}

TEST_CASE("commute-check on a small configuration")
{
  CHECK(run({"commute-check", "--pmax", "2", "--fields", "2", "--assert", "--out",
             "/tmp/hpbem_commute.csv"}) == 0);
  const std::string text = slurp("/tmp/hpbem_commute.csv");
  CHECK(text.rfind("p,field,residual_m12,residual_l2_right,residual_l2_left", 0) == 0);
}

TEST_CASE("piola-check passes its assertions and is deterministic")
{
  CHECK(run({"piola-check", "--assert", "--out", "/tmp/hpbem_piola_a.csv"}) == 0);
  CHECK(run({"piola-check", "--assert", "--out", "/tmp/hpbem_piola_b.csv"}) == 0);
  CHECK(slurp("/tmp/hpbem_piola_a.csv") == slurp("/tmp/hpbem_piola_b.csv"));
}

TEST_CASE("efie-solve writes the documented row layout and reruns byte-identically")
{
  CHECK(run({"efie-solve", "--mesh", "screen", "--refine", "1", "--degree", "1", "--wavenumber",
             "1.0", "--assert", "--out", "/tmp/hpbem_solve.csv"}) == 0);
  const std::string text = slurp("/tmp/hpbem_solve.csv");
  CHECK(text.rfind("N,h,p,k,residual,energy_surrogate_of_difference_to_finest,assembly_seconds",
                   0) == 0);
  CHECK(text.find(",na") != std::string::npos); // deterministic mode hides timings

  CHECK(run({"efie-solve", "--mesh", "screen", "--refine", "1", "--degree", "1", "--wavenumber",
             "1.0", "--assert", "--out", "/tmp/hpbem_solve2.csv"}) == 0);
  CHECK(slurp("/tmp/hpbem_solve2.csv") == text);
}
