#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "netalign/errors.h"
#include "netalign/walk_embedding.h"

namespace netalign {

std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf, ptr);
}

EmbeddingMatrix ReadEmbedding(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      auto pos = line.find_first_not_of(" \t\r");
      if (pos != std::string::npos && line[pos] != '#') return true;
    }
    return false;
  };
  if (!next_line()) throw DataError("embedding file is empty");
  long long n = -1, d = -1;
  {
    std::istringstream header(line);
    if (!(header >> n >> d) || n < 0 || d < 1)
      throw ParseError(line_no, "expected header 'n d'");
  }
  EmbeddingMatrix x;
  x.vectors.resize(n, d);
  x.labels.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    if (!next_line())
      throw DataError("embedding file ends after " + std::to_string(i) +
                      " of " + std::to_string(n) + " rows");
    std::istringstream row(line);
    std::string label;
    row >> label;
    for (long long j = 0; j < d; ++j) {
      std::string token;
      if (!(row >> token))
        throw ParseError(line_no, "expected " + std::to_string(d) + " values");
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
      if (ec != std::errc() || ptr != token.data() + token.size())
        throw ParseError(line_no, "'" + token + "' is not a number");
      x.vectors(i, j) = v;
    }
    std::string extra;
    if (row >> extra) throw ParseError(line_no, "too many values in row");
    x.labels.push_back(std::move(label));
  }
  x.Validate();
  return x;
}

EmbeddingMatrix ReadEmbeddingFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return ReadEmbedding(in);
}

void WriteEmbedding(const EmbeddingMatrix& x, std::ostream& out) {
  out << x.vectors.rows() << ' ' << x.vectors.cols() << '\n';
  for (Eigen::Index i = 0; i < x.vectors.rows(); ++i) {
    out << x.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < x.vectors.cols(); ++j)
      out << ' ' << FormatDouble(x.vectors(i, j));
    out << '\n';
  }
}

void WriteEmbeddingFile(const EmbeddingMatrix& x, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  WriteEmbedding(x, out);
  if (!out) throw DataError("write error on '" + path + "'");
}

}  // namespace netalign
