#include "boah/space_json.hpp"
#include "support.hpp"

using namespace boah;
using nlohmann::json;

namespace {

const char* kRbf = R"({
  "hyperparameters": [
    {"name": "kernel", "type": "categorical", "choices": ["rbf", "linear"], "default": "rbf"},
    {"name": "gamma", "type": "continuous", "lower": 1e-5, "upper": 10, "log": true},
    {"name": "depth", "type": "integer", "lower": 1, "upper": 8},
    {"name": "size", "type": "ordinal", "choices": ["small", "medium", "large"]}
  ],
  "conditions": [{"child": "gamma", "parent": "kernel", "values": ["rbf"]}]
})";

}  // namespace

TEST_SUITE("space_json") {
  TEST_CASE("parses the documented schema and materializes defaults") {
    const auto s = space_from_json(json::parse(kRbf));
    REQUIRE(s.dimension() == 4);
    CHECK(s.hyperparameter(0).kind == HpKind::categorical);
    CHECK(s.hyperparameter(1).log_scale);
    CHECK(std::get<double>(s.hyperparameter(1).default_value) == doctest::Approx(std::sqrt(1e-5 * 10.0)));
    CHECK(std::get<double>(s.hyperparameter(2).default_value) == 5.0);  // round(4.5) away from zero
    CHECK(std::get<std::string>(s.hyperparameter(3).default_value) == "small");
    CHECK(s.conditions().size() == 1);
  }

  TEST_CASE("canonical form round-trips with a stable digest") {
    const auto s = space_from_json(json::parse(kRbf));
    const auto doc = space_to_json(s);
    const auto again = space_from_json(json::parse(doc.dump()));
    CHECK(space_to_json(again).dump() == doc.dump());
    CHECK(space_digest(again) == space_digest(s));
    CHECK(space_digest(s).size() == 64);
  }

  TEST_CASE("different spaces have different digests") {
    auto doc = json::parse(kRbf);
    const auto a = space_digest(space_from_json(doc));
    doc["hyperparameters"][2]["upper"] = 9;
    CHECK(space_digest(space_from_json(doc)) != a);
  }

  TEST_CASE("unknown and misplaced keys are rejected") {
    auto doc = json::parse(kRbf);
    doc["extra"] = 1;
    CHECK_THROWS_KIND(space_from_json(doc), ErrorKind::InvalidSpaceJson);
    doc = json::parse(kRbf);
    doc["hyperparameters"][0]["lower"] = 0;
    CHECK_THROWS_KIND(space_from_json(doc), ErrorKind::InvalidSpaceJson);
    doc = json::parse(kRbf);
    doc["hyperparameters"][1]["type"] = "real";
    CHECK_THROWS_KIND(space_from_json(doc), ErrorKind::InvalidSpaceJson);
  }

  TEST_CASE("build errors surface through the parser") {
    auto doc = json::parse(kRbf);
    doc["hyperparameters"][1]["name"] = "kernel";
    CHECK_THROWS_KIND(space_from_json(doc), ErrorKind::DuplicateName);
    doc = json::parse(kRbf);
    doc["conditions"].push_back({{"child", "kernel"}, {"parent", "gamma"}, {"values", {0.5}}});
    const auto kind = boah::test::thrown_kind([&] { space_from_json(doc); });
    CHECK((kind == ErrorKind::CycleInConditions || kind == ErrorKind::IllegalActivatingValue ||
           kind == ErrorKind::DuplicateCondition));
  }

  TEST_CASE("configuration JSON round-trip") {
    const auto s = space_from_json(json::parse(kRbf));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
      const auto c = s.sample(rng);
      const auto values = config_values_to_json(s, c);
      CHECK(config_from_json(s, json::parse(values.dump())) == c);
      const auto active = config_active_to_json(s, c);
      CHECK(active["gamma"].get<bool>() == c.active(1));
    }
    CHECK_THROWS_KIND(config_from_json(s, json::parse(R"({"kernel":"rbf"})")), ErrorKind::InvalidConfiguration);
  }

  TEST_CASE("numeric choice labels") {
    CHECK(choice_label(json(3)) == "3");
    CHECK(choice_label(json("x")) == "x");
  }
}
