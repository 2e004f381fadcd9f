#include "spinsim/io.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <limits>
#include <sstream>

using namespace spinsim;

TEST_CASE("spin parsing") {
  CHECK(parse_spin("5/2").twice_s() == 5);
  CHECK(parse_spin("3").twice_s() == 6);
  CHECK(parse_spin("0.5").twice_s() == 1);
  CHECK(parse_spin("1.5").twice_s() == 3);
  for (const char* bad : {"0", "1/3", "-1", "abc", "", "2/0", "0.3", "1/2x"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_spin(bad), UsageError);
  }
}

TEST_CASE("direction parsing") {
  auto v = parse_direction("0,0,2");
  CHECK(v.z() == doctest::Approx(1.0));
  auto w = parse_direction("1,1,0");
  CHECK(w.x() == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(parse_direction("0,0,0"), UsageError);
  CHECK_THROWS_AS(parse_direction("1,2"), UsageError);
  CHECK_THROWS_AS(parse_direction("1,a,2"), UsageError);
}

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3) == "0.333333333333");
  CHECK(format_number(123456.0) == "123456");
  CHECK(format_number(-2.5e-7) == "-0.00000025");
  CHECK(format_number(1e20).find('e') != std::string::npos);
}

TEST_CASE("csv writer quotes and checks width") {
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"name", "value", "count"});
  w.row({std::string("a,b"), 0.25, std::int64_t(3)});
  w.row({std::string("say \"hi\""), -1.0, std::int64_t(-4)});
  CHECK(os.str() == "name,value,count\n\"a,b\",0.25,3\n\"say \"\"hi\"\"\",-1,-4\n");
  CHECK_THROWS(w.row({0.1}));
}

TEST_CASE("json records keep key order and parse back") {
  JsonRecord r;
  r.add("version", std::string(kVersion))
      .add("seed", kDefaultSeed)
      .add("x", 0.125)
      .add("bad", std::numeric_limits<double>::infinity())
      .add("ok", true)
      .add("v", std::vector<double>{1, 2.5})
      .add("name", "a\"b");
  const auto s = r.str();
  CHECK(s.rfind("{\"version\":\"0.1.0\",\"seed\":42,", 0) == 0);
  auto j = nlohmann::json::parse(s);
  CHECK(j["x"] == 0.125);
  CHECK(j["bad"].is_null());
  CHECK(j["v"][1] == 2.5);
  CHECK(j["name"] == "a\"b");
  CHECK(json_string("line\n") == "\"line\\n\"");
}
