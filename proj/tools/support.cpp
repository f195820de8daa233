#include "support.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <openssl/evp.h>

namespace cli {

namespace {

std::uint64_t parse_plain(std::string_view s, std::string_view whole) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw UsageError("expected a non-negative integer, got '" + std::string(whole) + "'");
  }
  return v;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::string_view whole) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (base != 0 && r > UINT64_MAX / base) throw UsageError("integer too large: '" + std::string(whole) + "'");
    r *= base;
  }
  return r;
}

void flatten(const Json& v, const std::string& prefix, std::vector<std::pair<std::string, const Json*>>& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else {
    out.emplace_back(prefix, &v);
  }
}

std::string scalar_text(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ';';
      s += scalar_text(v[i]);
    }
    return s;
  }
  return v.dump();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

}  // namespace

std::uint64_t parse_count(std::string_view text) {
  if (text.empty()) throw UsageError("expected a non-negative integer, got ''");
  if (const auto caret = text.find('^'); caret != std::string_view::npos) {
    return checked_pow(parse_plain(text.substr(0, caret), text), parse_plain(text.substr(caret + 1), text), text);
  }
  if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    const std::uint64_t mant = parse_plain(text.substr(0, e), text);
    const std::uint64_t scale = checked_pow(10, parse_plain(text.substr(e + 1), text), text);
    if (mant != 0 && scale > UINT64_MAX / mant) throw UsageError("integer too large: '" + std::string(text) + "'");
    return mant * scale;
  }
  return parse_plain(text, text);
}

std::istream& operator>>(std::istream& in, Count& c) {
  std::string s;
  in >> s;
  try {
    c.value = parse_count(s);
  } catch (const UsageError&) {
    in.setstate(std::ios::failbit);
  }
  return in;
}

std::ostream& operator<<(std::ostream& out, const Count& c) { return out << c.value; }

TuplePtr parse_tuple(const std::string& text, bool normalize) {
  pl_tuple* t = nullptr;
  check(pl_tuple_parse(text.c_str(), normalize ? 1 : 0, &t));
  return TuplePtr(t);
}

Json tuple_json(const pl_tuple* t) {
  Json a = Json::array();
  for (std::size_t i = 0; i < pl_tuple_size(t); ++i) a.push_back(pl_tuple_offset(t, i));
  return a;
}

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  EVP_DigestInit_ex(static_cast<EVP_MD_CTX*>(ctx_), EVP_sha256(), nullptr);
}

Sha256::~Sha256() { EVP_MD_CTX_free(static_cast<EVP_MD_CTX*>(ctx_)); }

void Sha256::update(std::string_view bytes) {
  EVP_DigestUpdate(static_cast<EVP_MD_CTX*>(ctx_), bytes.data(), bytes.size());
}

std::string Sha256::hex() {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(static_cast<EVP_MD_CTX*>(ctx_), md, &len);
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += digits[md[i] >> 4];
    s += digits[md[i] & 15];
  }
  return s;
}

std::string sha256_hex(std::string_view bytes) {
  Sha256 h;
  h.update(bytes);
  return h.hex();
}

void Emitter::write(const std::string& line) {
  out_ << line << '\n';
  hash_.update(line);
  hash_.update("\n");
}

void Emitter::emit(const Json& record) {
  ++records_;
  if (format_ == Format::Json) {
    write(record.dump());
    return;
  }
  std::vector<std::pair<std::string, const Json*>> cells;
  flatten(record, "", cells);
  if (header_.empty()) {
    std::string line;
    for (const auto& [name, v] : cells) {
      header_.push_back(name);
      if (!line.empty()) line += ',';
      line += csv_field(name);
    }
    write(line);
  }
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_field(scalar_text(*cells[i].second));
  }
  write(line);
}

}  // namespace cli
