#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rydpulse/register.hpp"

using namespace rydpulse;

namespace {

Register mis_register() {
  return Register::from_coordinates({{0, 0}, {-4, -7}, {4, -7}, {8, 6}, {-8, 6}});
}

bool has(const std::vector<Violation> &vs, const std::string &constraint) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation &v) { return v.constraint == constraint; });
}

} // namespace

TEST_CASE("named registers") {
  Register reg({{"c", -2, 0}, {"t", 2, 0}});
  CHECK(reg.size() == 2);
  CHECK(reg.distance(0, 1) == 4.0);
  CHECK(reg.index_of("t") == 1);
  CHECK_THROWS_AS(reg.index_of("x"), Error);
  CHECK(validate_register(reference_device(), reg).empty());
  CHECK_THROWS_AS(Register({{"a", 0, 0}, {"a", 5, 0}}), Error);
  CHECK_THROWS_AS(Register({}), Error);
  CHECK(Register({{"solo", 0, 0}}).size() == 1);
  CHECK(mis_register().size() == 5);
  CHECK(mis_register().atom(3).name == "q3");
}

TEST_CASE("square registers") {
  auto one = Register::square(1, 7.0);
  CHECK(one.atom(0).x == 0.0);
  CHECK(one.atom(0).y == 0.0);

  auto four = Register::square(2, 4.0);
  CHECK(four.distance(0, 1) == doctest::Approx(4.0));
  CHECK(four.distance(0, 3) == doctest::Approx(4.0 * std::sqrt(2.0)));

  const double r = 7.5;
  auto nine = Register::square(3, r, "q");
  CHECK(nine.atom(8).name == "q8");
  double far = 0.0;
  for (const auto &a : nine.atoms()) far = std::max(far, std::hypot(a.x, a.y));
  CHECK(far == doctest::Approx(std::sqrt(2.0) * r));
  for (std::size_t i = 0; i < 9; ++i) {
    double nearest = INFINITY;
    for (std::size_t j = 0; j < 9; ++j) {
      if (i != j) nearest = std::min(nearest, nine.distance(i, j));
    }
    CHECK(nearest == r);
  }
  CHECK_THROWS_AS(Register::square(0, 1.0), Error);
}

TEST_CASE("register validation") {
  const auto &dev = reference_device();
  CHECK(has(validate_register(dev, Register({{"a", 0, 0}, {"b", 3.9, 0}})), "min_atom_distance"));
  auto wide = Register({{"a", -60, 0}, {"b", 60, 0}});
  CHECK(has(validate_register(dev, wide), "max_radius_from_center"));

  auto reg = mis_register();
  CHECK(validate_register(dev, reg).empty());
  CHECK(validate_register(dev, reg.translated(100.0, -250.0)).empty());
  CHECK(validate_register(dev, wide.translated(1e3, 1e3)).size() ==
        validate_register(dev, wide).size());
}

TEST_CASE("blockade graph") {
  auto reg = mis_register();
  const double rb = reference_device().rydberg_blockade_radius(1.0);
  CHECK(rb == doctest::Approx(13.08).epsilon(1e-3));
  // Pair distances: sqrt65, sqrt65, 10, 10, 8 inside; sqrt185, sqrt313, 16 outside.
  std::vector<Edge> expected{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}};
  CHECK(blockade_graph(reg, rb) == expected);
  CHECK(blockade_graph(reg, 7.9).empty());
  CHECK(blockade_graph(reg, 100.0).size() == 10);
  CHECK(blockade_graph(reg, 8.0) == std::vector<Edge>{{1, 2}});

  std::vector<Edge> prev;
  for (double r = 5.0; r < 25.0; r += 0.5) {
    auto e = blockade_graph(reg, r);
    CHECK(std::includes(e.begin(), e.end(), prev.begin(), prev.end()));
    prev = e;
  }
}

TEST_CASE("register json") {
  auto reg = mis_register();
  CHECK(Register::from_json(reg.to_json()) == reg);
  CHECK(reg.to_json()["atoms"][1]["x_um"] == -4.0);
}
