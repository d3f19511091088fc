#include <sstream>

#include "doctest.h"
#include "frontsd/archive_io.hpp"
#include "frontsd/errors.hpp"
#include "helpers.hpp"

using namespace frontsd;

namespace {

Archive sample() {
  FrontMember a;
  a.id = 0;
  a.x = Eigen::Vector2d(0.1, 1.0 / 3.0);
  a.fx = ObjectiveVector{1e-300, 2.5};
  FrontMember b;
  b.id = 4;
  b.parent_id = 0;
  b.x = Eigen::Vector2d(-7.25, 3e10);
  b.fx = ObjectiveVector{2.0, 0.1 + 0.2};
  return Archive::from_members({a, b});
}

}  // namespace

TEST_SUITE("archive_io") {
  TEST_CASE("doubles round-trip exactly") {
    for (double v : {0.1, 1.0 / 3.0, -1e-308, 5e-324, 1.7976931348623157e308, 0.0, 123456789.0}) {
      CHECK(parse_double(format_double(v), 1) == v);
    }
    CHECK_THROWS_AS(parse_double("1.5x", 3), FormatError);
  }

  TEST_CASE("write then read reproduces the archive") {
    std::stringstream s;
    write_archive_csv(s, sample(), 2, 2);
    std::string header;
    std::getline(s, header);
    CHECK(header == "id,parent_id,x_1,x_2,f_1,f_2");
    s.seekg(0);
    const ArchiveCsv back = read_archive_csv(s);
    CHECK(back.n == 2);
    CHECK(back.m == 2);
    REQUIRE(back.members.size() == 2);
    const Archive orig = sample();
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(back.members[i].id == orig[i].id);
      CHECK(back.members[i].parent_id == orig[i].parent_id);
      CHECK((back.members[i].x.array() == orig[i].x.array()).all());
      CHECK(back.members[i].fx == orig[i].fx);
    }
    CHECK(back.lines == std::vector<std::size_t>{2, 3});
  }

  TEST_CASE("missing column is reported with its line") {
    std::stringstream s("id,parent_id,x_1,f_1,f_2\n0,,1,2,3\n1,0,1,2\n");
    try {
      read_archive_csv(s);
      FAIL("expected a format error");
    } catch (const FormatError& e) {
      CHECK(e.line() == 3);
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }

  TEST_CASE("bad headers are rejected") {
    std::stringstream s("id,x_1,f_1\n");
    CHECK_THROWS_AS(read_archive_csv(s), FormatError);
    std::stringstream t("id,parent_id,x_1,f_1,f_2\n0,,abc,1,2\n");
    CHECK_THROWS_AS(read_archive_csv(t), FormatError);
  }

  TEST_CASE("windows line endings are accepted") {
    std::stringstream s("id,parent_id,x_1,f_1,f_2\r\n0,,1,2,3\r\n");
    CHECK(read_archive_csv(s).members.size() == 1);
  }
}
