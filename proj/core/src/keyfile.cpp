#include "wiener/keyfile.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>

namespace wiener {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool known_name(std::string_view name) {
  return name == "n" || name == "e" || name == "p" || name == "q" || name == "d";
}

}  // namespace

KeyParseError::KeyParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

KeyFile parse_key(std::istream& in) {
  std::map<std::string, Nat, std::less<>> fields;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw KeyParseError(line_no, "expected `name = value`");
    const std::string name(trim(line.substr(0, eq)));
    const std::string_view text = trim(line.substr(eq + 1));
    if (!known_name(name)) throw KeyParseError(line_no, "unknown field `" + name + "`");
    if (fields.contains(name)) throw KeyParseError(line_no, "duplicate field `" + name + "`");
    auto value = parse_hex(text);
    if (!value) throw KeyParseError(line_no, "invalid hex value for `" + name + "`");
    fields.emplace(name, std::move(*value));
  }

  const auto last_line = line_no;
  if (!fields.contains("n")) throw KeyParseError(last_line, "missing field `n`");
  if (!fields.contains("e")) throw KeyParseError(last_line, "missing field `e`");

  KeyFile key;
  key.pub = {fields.at("n"), fields.at("e")};
  const int private_fields = static_cast<int>(fields.count("p") + fields.count("q") +
                                              fields.count("d"));
  if (private_fields == 3) {
    PrivateKey priv{fields.at("p"), fields.at("q"), fields.at("d"), 0};
    priv.phi = (priv.p - 1) * (priv.q - 1);
    key.priv = std::move(priv);
  } else if (private_fields != 0) {
    throw KeyParseError(last_line, "p, q and d must appear together");
  }
  return key;
}

KeyFile read_key(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open key file " + path.string());
  return parse_key(in);
}

void write_field(std::ostream& out, std::string_view name, const Nat& value) {
  out << name << " = " << to_hex(value) << '\n';
}

void write_key(std::ostream& out, const PublicKey& pub, const PrivateKey* priv) {
  write_field(out, "n", pub.n);
  write_field(out, "e", pub.e);
  if (priv != nullptr) {
    write_field(out, "p", priv->p);
    write_field(out, "q", priv->q);
    write_field(out, "d", priv->d);
  }
}

void write_key(const std::filesystem::path& path, const PublicKey& pub,
               const PrivateKey* priv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write key file " + path.string());
  write_key(out, pub, priv);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace wiener
