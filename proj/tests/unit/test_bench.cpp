#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vortnet/bench.hpp"
#include "vortnet/error.hpp"

using namespace vortnet;

namespace {

bool same_except_timing(const BenchmarkRecord& a, const BenchmarkRecord& b) {
  return a.field_id == b.field_id && a.n == b.n && a.method == b.method && a.sampler == b.sampler &&
         a.fraction == b.fraction && a.l == b.l && a.seed == b.seed && a.k == b.k &&
         a.angle_error_deg == b.angle_error_deg;
}

}  // namespace

TEST_CASE("sample count rounding") {
  CHECK(sample_count(0.10, 4096, 3) == 410);
  CHECK(sample_count(0.01, 4096, 1) == 41);
  CHECK(sample_count(1.0, 144, 3) == 144);
  CHECK(sample_count(0.001, 100, 3) == 3);  // clamped up to k
  CHECK(sample_count(0.001, 100, 0) == 1);
  CHECK(sample_count(0.125, 4, 1) == 1);    // round(0.5) is 1
  CHECK_THROWS_AS(sample_count(0.0, 100, 1), InvalidArgument);
  CHECK_THROWS_AS(sample_count(1.5, 100, 1), InvalidArgument);
  CHECK_THROWS_AS(sample_count(0.5, 10, 11), InvalidArgument);
}

TEST_CASE("percentiles against the type-7 oracle") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (std::size_t n : {1u, 2u, 3u, 7u, 20u, 101u}) {
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    for (double q : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0})
      CHECK(percentile(v, q) == doctest::Approx(oracle::quantile(v, q)).epsilon(1e-14));
    const auto qs = quartiles(v);
    CHECK(qs.median == doctest::Approx(oracle::quantile(v, 0.5)).epsilon(1e-14));
  }
  CHECK(percentile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK_THROWS_AS(percentile({}, 0.5), InvalidArgument);
  CHECK_THROWS_AS(percentile({1.0}, 1.5), InvalidArgument);
}

TEST_CASE("summarize") {
  BenchmarkRecord r;
  r.method = Method::nystrom;
  r.sampler = SamplerKind::halton;
  r.fraction = 0.1;
  r.l = 10;
  r.angle_error_deg = 3.5;
  r.wall_time_s = 0.25;

  SUBCASE("single record") {
    const auto rows = summarize(std::vector<BenchmarkRecord>{r});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].trials == 1);
    CHECK(rows[0].error_deg->median == 3.5);
    CHECK(rows[0].wall_time_s.median == 0.25);
  }
  SUBCASE("constant errors have zero spread") {
    const auto rows = summarize(std::vector<BenchmarkRecord>(9, r));
    CHECK(rows[0].error_deg->p75 - rows[0].error_deg->p25 == 0.0);
  }
  SUBCASE("groups in first-seen order; power rows have no error") {
    std::vector<BenchmarkRecord> rs;
    BenchmarkRecord p;
    p.method = Method::power;
    p.wall_time_s = 1.0;
    rs = {r, p, r};
    rs[2].fraction = 0.2;
    const auto rows = summarize(rs);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].method == Method::power);
    CHECK_FALSE(rows[1].error_deg.has_value());
    CHECK(rows[2].fraction == 0.2);
  }
  CHECK_THROWS_AS(summarize(std::vector<BenchmarkRecord>{}), InvalidArgument);
}

TEST_CASE("run_sweep") {
  const auto f = synth_turbulence_field(12, 12, 4);
  SweepConfig cfg;
  cfg.field_id = "turb12";
  cfg.fractions = {0.1, 0.25};
  cfg.trials = 3;
  cfg.base_seed = 7;

  SUBCASE("cartesian record count, key order and seeds") {
    const auto res = run_sweep(f, cfg);
    REQUIRE(res.records.size() == 2 * 2 * 2 * 3);
    std::size_t idx = 0;
    for (Method m : cfg.methods)
      for (SamplerKind s : cfg.samplers)
        for (double fr : cfg.fractions)
          for (std::size_t t = 0; t < 3; ++t, ++idx) {
            const auto& rec = res.records[idx];
            CHECK(rec.method == m);
            CHECK(rec.sampler == s);
            CHECK(rec.fraction == fr);
            CHECK(rec.seed == 7 + t);
            CHECK(rec.l == sample_count(fr, 144, 1));
            CHECK(rec.field_id == "turb12");
            REQUIRE(rec.angle_error_deg.has_value());
            CHECK(*rec.angle_error_deg >= 0.0);
            CHECK(*rec.angle_error_deg <= 90.0);
            CHECK(rec.wall_time_s == doctest::Approx(rec.phases.total()));
          }
  }
  SUBCASE("full sample is exact for both methods") {
    cfg.fractions = {1.0};
    cfg.trials = 2;
    for (const auto& rec : run_sweep(f, cfg).records) CHECK(*rec.angle_error_deg < 1e-6);
  }
  SUBCASE("baseline matches the dense oracle") {
    const auto res = run_sweep(f, cfg);
    const auto ref = oracle::jacobi_eigen(oracle::adjacency_matrix(f));
    CHECK(oracle::angle_rad(res.baseline.vectors.col(0), ref.vectors.col(0)) < 1e-7);
  }
  SUBCASE("rerun is identical apart from timings, for any worker count") {
    cfg.workers = 1;
    const auto a = run_sweep(f, cfg);
    cfg.workers = 3;
    const auto b = run_sweep(f, cfg);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(same_except_timing(a.records[i], b.records[i]));
  }
  SUBCASE("power entries and matrix-free baseline") {
    cfg.methods = {Method::power, Method::nystrom};
    cfg.samplers = {SamplerKind::halton};
    cfg.materialize_cap_bytes = 1;  // forces the implicit baseline
    const auto res = run_sweep(f, cfg);
    REQUIRE(res.records.size() == 3 + 2 * 3);
    CHECK(res.records[0].method == Method::power);
    CHECK_FALSE(res.records[0].sampler.has_value());
    CHECK_FALSE(res.records[0].angle_error_deg.has_value());
    CHECK(res.records[0].l == 144);
  }
  SUBCASE("invalid configurations") {
    cfg.fractions = {0.0};
    CHECK_THROWS_AS(run_sweep(f, cfg), InvalidArgument);
    cfg.fractions = {0.1};
    cfg.trials = 0;
    CHECK_THROWS_AS(run_sweep(f, cfg), InvalidArgument);
  }
  SUBCASE("baseline failure aborts") {
    cfg.baseline.max_iters = 1;
    CHECK_THROWS_AS(run_sweep(f, cfg), ConvergenceError);
  }
}

TEST_CASE("records and summary CSV") {
  const auto f = synth_wake_field(10, 10, 1);
  SweepConfig cfg;
  cfg.fractions = {0.2};
  cfg.trials = 4;
  const auto res = run_sweep(f, cfg);

  std::stringstream buf;
  write_records_csv(buf, res.records);
  const std::string text = buf.str();
  CHECK(text.rfind("field_id,n,method,sampler,fraction,l,seed,k,angle_error_deg,wall_time_s,sketch_s,"
                   "decompose_s,reconstruct_s\n",
                   0) == 0);
  CHECK(text.find('\r') == std::string::npos);
  const auto back = read_records_csv(buf);
  REQUIRE(back.size() == res.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(same_except_timing(back[i], res.records[i]));
    CHECK(back[i].wall_time_s == res.records[i].wall_time_s);
  }

  // Summary columns recomputed independently from the records.
  std::stringstream sum;
  write_summary_csv(sum, summarize(res.records));
  std::string header, line;
  std::getline(sum, header);
  CHECK(header ==
        "method,sampler,fraction,l,trials,error_p25,error_median,error_p75,error_mean,time_p25,"
        "time_median,time_p75,time_mean");
  std::size_t group = 0;
  while (std::getline(sum, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 13);
    std::vector<double> errors;
    for (std::size_t t = 0; t < 4; ++t) errors.push_back(*res.records[group * 4 + t].angle_error_deg);
    CHECK(std::stod(cells[5]) == doctest::Approx(oracle::quantile(errors, 0.25)).epsilon(1e-14));
    CHECK(std::stod(cells[6]) == doctest::Approx(oracle::quantile(errors, 0.5)).epsilon(1e-14));
    CHECK(std::stod(cells[7]) == doctest::Approx(oracle::quantile(errors, 0.75)).epsilon(1e-14));
    CHECK(cells[4] == "4");
    ++group;
  }
  CHECK(group == 4);

  std::istringstream bad_header("field,n\n");
  CHECK_THROWS_AS(read_records_csv(bad_header), FormatError);
}
