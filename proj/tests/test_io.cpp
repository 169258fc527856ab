#include <catch_amalgamated.hpp>

#include <unistd.h>

#include <filesystem>

#include "bergman/io.hpp"

using namespace bergman;

namespace {

std::filesystem::path scratch_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("bergman_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("domain files round-trip", "[io]") {
  const std::vector<DomainSpec> domains = {
      DomainSpec::polydisc(make_cvec({{0.5, -1}, {0, 0}}), (RVec(2) << 1.0, 0.25).finished()),
      DomainSpec::ball(make_cvec({{1, 0}, {0, 2}}), 0.8), DomainSpec::ellipsoid({1, 2, 3}),
      make_egg({1, 2}), make_model_hypersurface(2, 2.0)};
  const CVec z = make_cvec({{0.3, 0.1}, {-0.2, 0.05}});
  for (const DomainSpec& d : domains) {
    const DomainSpec back = domain_from_json(json::parse(domain_to_json(d).dump()));
    CHECK(back.kind() == d.kind());
    CHECK(back.dimension() == d.dimension());
    if (d.dimension() == 2) CHECK(back.rho(z) == d.rho(z));
    CHECK(domain_to_json(back) == domain_to_json(d));
  }
}

TEST_CASE("bounding-box overrides", "[io]") {
  const json j = json::parse(R"({"kind": "ball", "center": [0,0,0,0], "radius": 1,
                                 "bbox": [[-1,1],[-1,1],[-1,1],[-0.5,0.5]]})");
  const DomainSpec d = domain_from_json(j);
  CHECK(d.bounding_box().hi[3] == 0.5);
  CHECK(domain_to_json(d).at("bbox") == j.at("bbox"));
}

TEST_CASE("malformed domain files are usage errors", "[io]") {
  for (const char* text : {R"({"kind": "torus"})", R"({"radius": 1})", R"({"kind": "ball", "center": [0,0,0]})",
                           R"({"kind": "ball", "center": "x", "radius": 1})",
                           R"({"kind": "ellipsoid", "exponents": [1, 2], "dimension": 3})",
                           R"({"kind": "general", "rho": "nope", "dimension": 2})"})
    CHECK_THROWS_AS(domain_from_json(json::parse(text)), UsageError);
  CHECK_THROWS_AS(load_domain("/nonexistent/domain.json"), UsageError);
  const DomainSpec inter = intersect_domains(DomainSpec::unit_ball(2), DomainSpec::ball(make_cvec({{1, 0}, {0, 0}}), 0.8));
  CHECK_THROWS_AS(domain_to_json(inter), UsageError);
}

TEST_CASE("shipped sample domains load", "[io]") {
  const std::filesystem::path dir = BERGMAN_DATA_DIR;
  int count = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    CHECK_NOTHROW(load_domain(e.path().string()));
    ++count;
  }
  CHECK(count >= 5);
}

TEST_CASE("models reload bit for bit", "[io]") {
  const DomainSpec egg = make_egg({1, 2});
  const KernelModel m = build_model(egg, 4, build_quadrature(egg, QuadScheme::MonteCarlo, 5000, 1));
  const KernelModel back = model_from_json(json::parse(model_to_json(m).dump()));
  CHECK(back.coeff() == m.coeff());
  CHECK(back.dropped() == m.dropped());
  CHECK(back.norm_source() == m.norm_source());
  CHECK(back.cond_estimate() == m.cond_estimate());
  const CVec p = make_cvec({{0.1, 0.2}, {0.3, 0}});
  CHECK(back.kernel(p) == m.kernel(p));

  json bad = model_to_json(m);
  bad["format"] = "other";
  CHECK_THROWS_AS(model_from_json(bad), UsageError);
  bad = model_to_json(m);
  bad["coeff_re"].erase(0);
  CHECK_THROWS_AS(model_from_json(bad), UsageError);
}

TEST_CASE("model cache", "[io]") {
  const auto dir = scratch_dir("cache");
  ModelCache cache(dir);
  const DomainSpec ell = DomainSpec::ellipsoid({1, 2});
  const std::string key = model_cache_key(ell, 6, "closed-form", {});
  CHECK(key.size() == 16);
  CHECK(key != model_cache_key(ell, 7, "closed-form", {}));
  BuildOptions scaled;
  scaled.basis_scale = 0.5;
  CHECK(key != model_cache_key(ell, 6, "closed-form", scaled));

  int builds = 0;
  auto build = [&] {
    ++builds;
    return build_model(ell, 6);
  };
  bool hit = true;
  const KernelModel a = cache.get_or_build(key, build, &hit);
  CHECK_FALSE(hit);
  const KernelModel b = cache.get_or_build(key, build, &hit);
  CHECK(hit);
  CHECK(builds == 1);
  CHECK(a.coeff() == b.coeff());
  CHECK(std::filesystem::exists(cache.path_for(key)));
  std::filesystem::remove_all(dir);
}

TEST_CASE("complex vector parsing", "[io]") {
  const CVec z = parse_cvec("0.5, -1,2e-3,0", "point");
  REQUIRE(z.size() == 2);
  CHECK(z[0] == cplx(0.5, -1));
  CHECK(z[1] == cplx(2e-3, 0));
  CHECK_THROWS_AS(parse_cvec("1,2,3", "point"), UsageError);
  CHECK_THROWS_AS(parse_cvec("1,abc", "point"), UsageError);
  CHECK_THROWS_AS(parse_cvec("1,2x", "point"), UsageError);
  CHECK_THROWS_AS(parse_cvec("", "point"), UsageError);
  CHECK(cvec_to_json(z) == json::parse("[0.5, -1, 0.002, 0]"));
}

TEST_CASE("CSV output", "[io]") {
  CsvWriter w({"t", "H"});
  w.row({fmt_double(0.1), fmt_double(-2.0 / 3.0)});
  CHECK(w.str() == "t,H\n0.10000000000000001,-0.66666666666666663\n");
  CHECK(std::stod(fmt_double(-2.0 / 3.0)) == -2.0 / 3.0);
  CHECK_THROWS_AS(w.row({"1"}), UsageError);
}
