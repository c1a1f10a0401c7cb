#include "unisim/matrix_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace unisim {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  require_square(m, "matrix_to_json");
  require_finite(m, "matrix_to_json");
  json entries = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      entries.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
  return json{{"n", m.rows()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("entries"))
    throw error("matrix file: expected an object with \"n\" and \"entries\"");
  const json& jn = doc.at("n");
  if (!jn.is_number_integer() || jn.get<long long>() < 1)
    throw error("matrix file: \"n\" must be a positive integer");
  const auto n = static_cast<Eigen::Index>(jn.get<long long>());
  const json& entries = doc.at("entries");
  if (!entries.is_array() || static_cast<Eigen::Index>(entries.size()) != n * n)
    throw error("matrix file: \"entries\" must hold n*n values");

  ComplexMatrix m(n, n);
  for (Eigen::Index k = 0; k < n * n; ++k) {
    const json& e = entries[static_cast<std::size_t>(k)];
    if (e.is_string()) {
      m(k / n, k % n) = parse_complex(e.get<std::string>());
      continue;
    }
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw error("matrix file: each entry must be [re, im] or a complex string");
    m(k / n, k % n) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  require_finite(m, "matrix file");
  return m;
}

std::string serialize_matrix(const ComplexMatrix& m) {
  return matrix_to_json(m).dump() + "\n";
}

ComplexMatrix parse_matrix(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw error(std::string("matrix file: ") + e.what());
  }
  return matrix_from_json(doc);
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str());
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) throw error("cannot write " + path.string());
  out << serialize_matrix(m);
  if (!out) throw error("write failed for " + path.string());
}

namespace {

double parse_double(std::string_view text, std::size_t& pos) {
  // std::from_chars does not accept a leading '+'.
  std::size_t start = pos;
  if (start < text.size() && text[start] == '+') ++start;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + text.size(), value);
  if (ec != std::errc()) throw error("invalid number in \"" + std::string(text) + "\"");
  pos = static_cast<std::size_t>(ptr - text.data());
  return value;
}

}  // namespace

Complex parse_complex(std::string_view token) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  if (token.empty()) throw error("empty complex number");

  std::size_t pos = 0;
  if (token == "i" || token == "+i") return {0.0, 1.0};
  if (token == "-i") return {0.0, -1.0};
  const double first = parse_double(token, pos);
  if (pos == token.size()) return {first, 0.0};
  if (token.substr(pos) == "i") return {0.0, first};

  const char sign = token[pos];
  if (sign != '+' && sign != '-') throw error("invalid complex number \"" + std::string(token) + "\"");
  const std::string_view rest = token.substr(pos);
  if (rest == "+i") return {first, 1.0};
  if (rest == "-i") return {first, -1.0};
  std::size_t inner = 0;
  const double second = parse_double(rest, inner);
  if (rest.substr(inner) != "i") throw error("invalid complex number \"" + std::string(token) + "\"");
  return {first, second};
}

}  // namespace unisim
