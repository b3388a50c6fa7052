#include <doctest.h>

#include <fstream>
#include <sstream>

#include "ilslab/error.hpp"
#include "ilslab/instance.hpp"
#include "ilslab/suite.hpp"

using namespace ilslab;

namespace {

const std::string kFixtures = ILSLAB_FIXTURES;

void expect_validation(const std::string& file, const std::string& field, const std::string& reason) {
  try {
    load_instance(kFixtures + "/" + file);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.field() == field);
    CHECK(e.reason() == reason);
  }
}

}  // namespace

TEST_CASE("load the F1 fixture") {
  const Instance inst = load_instance(kFixtures + "/f1.json");
  CHECK(inst.quotient->source_dim() == 2);
  CHECK(inst.base->size() == 3);
  CHECK(inst.sections.size() == 3);
  CHECK(inst.section("bump").value(2)(1) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(inst.schedule.size() == 3);
  CHECK(inst.cls.c == 2.0);
  CHECK(inst.field("hand").values(1, 0) == 4.0);
  CHECK(inst.field("phi").values(1, 2) == 4.0);
  CHECK_THROWS_AS(inst.section("nope"), Error);
}

TEST_CASE("validation errors carry field paths") {
  expect_validation("rank_deficient.json", "quotient.A", "RankDeficient");
  expect_validation("duplicate_points.json", "base.points", "Duplicate");
  expect_validation("not_on_fiber.json", "sections.bad.values", "NotOnFiber");
  try {
    load_instance(kFixtures + "/not_on_fiber.json");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("point 2") != std::string::npos);
  }
}

TEST_CASE("malformed documents") {
  CHECK_THROWS_AS(parse_instance_text("{"), Error);
  try {
    parse_instance_text(R"({"quotient": {"s": 2, "m": 1}})");
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
  }
  try {
    parse_instance_text(R"({"quotient": {"s": 2, "m": 1, "A": [[1, 0, 0]]}})");
    FAIL("expected DimensionMismatch");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "quotient.A");
    CHECK(e.reason() == "DimensionMismatch");
  }
  try {
    load_instance(kFixtures + "/missing.json");
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoError);
  }
}

TEST_CASE("instance round trip") {
  const Instance inst = load_instance(kFixtures + "/f1.json");
  const Instance back = parse_instance_text(to_json(inst).dump());
  CHECK(back.quotient->matrix() == inst.quotient->matrix());
  CHECK(back.base->points == inst.base->points);
  CHECK(back.base->weights == inst.base->weights);
  CHECK(back.schedule.radii() == inst.schedule.radii());
  for (const auto& [name, phi] : inst.sections) {
    CHECK(back.section(name).values() == phi.values());
  }
  CHECK(to_json(back) == to_json(inst));
}

TEST_CASE("generate_instance") {
  const GenerateSpec spec{3, 1, 10, 7};
  CHECK(to_json(generate_instance(spec)).dump() == to_json(generate_instance(spec)).dump());
  try {
    generate_instance({3, 3, 10, 1});
    FAIL("expected BadDims");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadDims);
  }
  CHECK_THROWS_AS(generate_instance({9, 1, 10, 1}), Error);
  CHECK_THROWS_AS(generate_instance({3, 1, 1, 1}), Error);
  CHECK_THROWS_AS(generate_instance({3, 1, 65, 1}), Error);
}

TEST_CASE("generated instances survive load validation") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t s = 2 + seed % 7;
    const GenerateSpec spec{s, 1 + seed % (s - 1), 2 + (seed * 7) % 63, seed};
    CAPTURE(seed);
    const Instance inst = generate_instance(spec);
    const Instance back = parse_instance_text(to_json(inst).dump());
    CHECK(back.sections.size() == 2);
    CHECK(is_admissible(back.section("phi"), back.cls));
    CHECK(to_json(back) == to_json(inst));
  }
}

TEST_CASE("F1 passes the theorem suite") {
  const Instance inst = load_instance(kFixtures + "/f1.json");
  const SuiteReport r = run_suite(inst, Suite::theorems, SuiteOptions{});
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
  CHECK(r.pass());
}

TEST_CASE("generated seed-7 instance passes everything") {
  const Instance inst = generate_instance({3, 1, 10, 7});
  const SuiteReport r = run_suite(inst, Suite::all, SuiteOptions{});
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CHECK(c.pass);
  }
  CHECK(r.seconds > 0.0);
}

TEST_CASE("suite errors name the failing check") {
  Instance inst = load_instance(kFixtures + "/f1.json");
  inst.schedule = ScaleSchedule({0.5});
  try {
    run_suite(inst, Suite::cheeger, SuiteOptions{});
    FAIL("expected EmptyBall");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyBall);
    CHECK(e.message().rfind("energy_order:", 0) == 0);
    CHECK(std::string(e.what()).rfind("EmptyBall: energy_order:", 0) == 0);
  }
  CHECK(parse_suite("geometry") == Suite::geometry);
  CHECK_THROWS_AS(parse_suite("everything"), Error);
}
