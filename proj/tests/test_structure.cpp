#include <doctest.h>

#include <nlohmann/json.hpp>

#include "pbg/error.hpp"
#include "pbg/structure.hpp"
#include "support.hpp"

using namespace pbg;
using nlohmann::json;

TEST_SUITE("structure") {
  TEST_CASE("bundled stack: 49 layers, 7245 nm, GaN on both ends") {
    const Stack s = testing::bundled_stack();
    CHECK(s.size() == 49);
    CHECK(total_thickness(s) == doctest::Approx(25 * 117.0 + 24 * 180.0));
    CHECK(total_thickness(s) == doctest::Approx(7245.0));
    CHECK(s.layers.front().material.name == "GaN");
    CHECK(s.layers.back().material.name == "GaN");
    int nonlinear = 0;
    for (const Layer& l : s.layers) {
      if (!l.chi2.is_zero()) {
        ++nonlinear;
        CHECK(l.material.name == "GaN");
        CHECK(l.chi2.at(0, 0, 0) == 10.0);
        CHECK(l.chi2.max_abs() == 10.0);
      }
    }
    CHECK(nonlinear == 25);
    CHECK(s.ambient_left.name == "vacuum");
    CHECK(s.regions() == 51);
    CHECK(s.region_thickness(0) == 0.0);
    CHECK(s.region_thickness(2) == 180.0);
  }

  TEST_CASE("boundary positions are strictly increasing from z0") {
    Stack s = testing::bundled_stack();
    s.z0_nm = -100.0;
    const auto z = boundary_positions(s);
    REQUIRE(z.size() == 50);
    CHECK(z.front() == -100.0);
    CHECK(z.back() == doctest::Approx(7145.0));
    for (std::size_t k = 1; k < z.size(); ++k) CHECK(z[k] > z[k - 1]);
  }

  TEST_CASE("periodic builder repeats the cell and optionally closes it") {
    const Material a = testing::constant_material("a", 2.0), b = testing::constant_material("b", 1.5);
    const std::vector<Layer> cell{testing::layer(a, 100.0, 3.0), testing::layer(b, 50.0)};
    CHECK(build_periodic(cell, 3, false).size() == 6);
    const Stack closed = build_periodic(cell, 3, true);
    CHECK(closed.size() == 7);
    CHECK(closed.layers.back().material == a);
    CHECK_THROWS_AS(build_periodic({}, 3, false), ConfigError);
    CHECK_THROWS_AS(build_periodic(cell, 0, false), ConfigError);
  }

  TEST_CASE("explicit layers and periodic blocks can be combined") {
    const MaterialRegistry reg = testing::bundled_materials();
    const json doc = json::parse(R"({
      "ambient_right": "GaN",
      "layers": [{"material": "AlN", "thickness_nm": 50}],
      "periodic": {"cell": [{"material": "GaN", "thickness_nm": 10}], "repetitions": 2}
    })");
    const Stack s = parse_stack(doc, reg);
    CHECK(s.size() == 3);
    CHECK(s.layers[0].material.name == "AlN");
    CHECK(s.ambient_left.name == "vacuum");
    CHECK(s.ambient_right.name == "GaN");
  }

  TEST_CASE("stack parse errors") {
    const MaterialRegistry reg = testing::bundled_materials();
    CHECK_THROWS_AS(parse_stack(json::parse(R"({"layers": [{"material": "Si", "thickness_nm": 5}]})"), reg),
                    ConfigError);
    CHECK_THROWS_AS(parse_stack(json::parse(R"({"layers": [{"material": "GaN", "thickness_nm": -5}]})"), reg),
                    ConfigError);
    CHECK_THROWS_AS(parse_stack(json::parse(R"({"layers": []})"), reg), ConfigError);
    CHECK_THROWS_AS(parse_stack(json::parse(R"({"layers": [{"material": "GaN", "thickness_nm": 5,
                        "d_eff_TE_pm_per_V": 1, "d_tensor_pm_per_V": [[[1,0,0],[0,0,0],[0,0,0]],
                        [[0,0,0],[0,0,0],[0,0,0]], [[0,0,0],[0,0,0],[0,0,0]]]}]})"),
                                reg),
                    ConfigError);
    CHECK_THROWS_AS(parse_stack(json::parse(R"({"layers": [{"material": "GaN", "thickness_nm": 5,
                        "d_tensor_pm_per_V": [[1,0,0]]}]})"),
                                reg),
                    ConfigError);
  }

  TEST_CASE("full tensor input and round trip through JSON") {
    const MaterialRegistry reg = testing::bundled_materials();
    json tensor = json::array();
    for (int a = 0; a < 3; ++a) {
      json rows = json::array();
      for (int b = 0; b < 3; ++b) rows.push_back(json::array({a + b, 0.5 * a, b == 2 ? 7.0 : 0.0}));
      tensor.push_back(rows);
    }
    const json doc{{"layers", json::array({json{{"material", "GaN"}, {"thickness_nm", 12.5},
                                                {"d_tensor_pm_per_V", tensor}}})}};
    const Stack s = parse_stack(doc, reg);
    CHECK(s.layers[0].chi2.at(2, 1, 0) == 3.0);
    CHECK(s.layers[0].chi2.at(1, 2, 2) == 7.0);
    const Stack back = parse_stack(to_json(s), reg);
    CHECK(back == s);
    CHECK(stack_hash(back) == stack_hash(s));
  }

  TEST_CASE("stack hash follows geometry and dispersion") {
    const Stack s = testing::bundled_stack();
    Stack thicker = s;
    thicker.layers[3].thickness_nm += 1e-6;
    CHECK(stack_hash(s) == stack_hash(testing::bundled_stack()));
    CHECK(stack_hash(s) != stack_hash(thicker));
    Stack other_index = s;
    for (Layer& l : other_index.layers)
      if (l.material.name == "AlN") l.material.dispersion = DispersionModel::constant(2.0);
    CHECK(stack_hash(s) != stack_hash(other_index));
  }

  TEST_CASE("tensor contraction") {
    const Chi2Tensor d = Chi2Tensor::te_only(10.0);
    const Vec3c x{1.0, 0.0, 0.0}, y{0.0, 1.0, 0.0};
    CHECK(d.contract(x, x, x) == std::complex<double>(10.0));
    CHECK(d.contract(x, y, x) == std::complex<double>(0.0));
    Chi2Tensor t;
    t.at(1, 2, 0) = 2.0;
    const Vec3c tm{0.0, 0.6, -0.8};
    CHECK(t.contract(tm, tm, x) == std::complex<double>(2.0 * 0.6 * -0.8));
    CHECK(t.scaled(3.0).at(1, 2, 0) == 6.0);
  }

  TEST_CASE("validation rejects empty stacks and non-finite tensors") {
    Stack s;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s.layers.push_back(testing::layer(vacuum(), 10.0, 1.0));
    CHECK_NOTHROW(s.validate());
    s.layers[0].chi2.at(0, 1, 2) = std::nan("");
    CHECK_THROWS_AS(s.validate(), ConfigError);
  }
}
