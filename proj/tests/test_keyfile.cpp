#include "wiener/keyfile.hpp"

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace wiener;

namespace {

KeyFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_key(in);
}

std::size_t error_line(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const KeyParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("round trip with private part") {
  const auto key = keygen_weak(64, 2, 3);
  std::ostringstream out;
  write_key(out, key.pub, &key.priv);
  const auto parsed = parse(out.str());
  CHECK(parsed.pub == key.pub);
  REQUIRE(parsed.priv.has_value());
  CHECK(*parsed.priv == key.priv);
}

TEST_CASE("round trip through a file") {
  const auto key = keygen_weak(64, 2, 4);
  const auto path = std::filesystem::temp_directory_path() / "wiener_keyfile_test.key";
  write_key(path, key.pub);
  const auto parsed = read_key(path);
  std::filesystem::remove(path);
  CHECK(parsed.pub == key.pub);
  CHECK_FALSE(parsed.priv.has_value());
}

TEST_CASE("public-only file") {
  const auto parsed = parse("n = 161d5\ne = 4649\n");
  CHECK(parsed.pub.n == 90581);
  CHECK(parsed.pub.e == 17993);
  CHECK_FALSE(parsed.priv.has_value());
}

TEST_CASE("writer output format") {
  std::ostringstream out;
  write_key(out, PublicKey{90581, 17993});
  CHECK(out.str() == "n = 161d5\ne = 4649\n");
}

TEST_CASE("blank lines are skipped") {
  const auto parsed = parse("\nn = 161d5\n\ne = 4649\n\n");
  CHECK(parsed.pub.e == 17993);
}

TEST_CASE("malformed input reports the line") {
  CHECK(error_line("n = 161d5\ne = zz\n") == 2);
  CHECK(error_line("n = 161D5\ne = 4649\n") == 1);
  CHECK(error_line("n = 161d5\nx = 5\ne = 4649\n") == 2);
  CHECK(error_line("n = 161d5\nn = 161d5\ne = 4649\n") == 2);
  CHECK(error_line("n 161d5\ne = 4649\n") == 1);
  CHECK(error_line("n = \ne = 4649\n") == 1);
}

TEST_CASE("missing or partial fields") {
  CHECK_THROWS_AS(parse("n = 161d5\n"), KeyParseError);
  CHECK_THROWS_AS(parse("e = 4649\n"), KeyParseError);
  CHECK_THROWS_AS(parse("n = 161d5\ne = 4649\np = ef\n"), KeyParseError);
  CHECK_THROWS_AS(parse(""), KeyParseError);
}

TEST_CASE("read_key on a missing file") {
  CHECK_THROWS(read_key("/nonexistent/wiener.key"));
}
