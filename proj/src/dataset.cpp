#include "causal/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "causal/error.hpp"

namespace causal {

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

// Shortest representation that round-trips through a double.
std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace

Dataset::Dataset(std::vector<std::string> names,
                 std::vector<std::vector<double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
  if (names_.size() != columns_.size())
    throw ArgumentError("column name count does not match column count");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (!valid_identifier(n))
      throw ArgumentError("invalid column name '" + n + "'");
    if (!seen.insert(n).second)
      throw ArgumentError("duplicate column name '" + n + "'");
  }
  rows_ = columns_.empty() ? 0 : columns_[0].size();
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].size() != rows_)
      throw ArgumentError("column '" + names_[i] + "' has " +
                          std::to_string(columns_[i].size()) +
                          " values, expected " + std::to_string(rows_));
    for (double v : columns_[i])
      if (!std::isfinite(v))
        throw ArgumentError("non-finite value in column '" + names_[i] + "'");
  }
}

bool Dataset::has_column(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& Dataset::column(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end())
    throw ArgumentError("unknown column '" + name + "'");
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

Dataset Dataset::with_column(const std::string& name,
                             std::vector<double> values) const {
  if (has_column(name))
    throw ArgumentError("column '" + name + "' already exists");
  if (!columns_.empty() && values.size() != rows_)
    throw ArgumentError("new column '" + name + "' has " +
                        std::to_string(values.size()) + " values, expected " +
                        std::to_string(rows_));
  auto names = names_;
  auto cols = columns_;
  names.push_back(name);
  cols.push_back(std::move(values));
  return Dataset(std::move(names), std::move(cols));
}

Dataset Dataset::replace_column(const std::string& name,
                                std::vector<double> values) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end())
    throw ArgumentError("unknown column '" + name + "'");
  if (values.size() != rows_)
    throw ArgumentError("replacement for '" + name + "' has " +
                        std::to_string(values.size()) + " values, expected " +
                        std::to_string(rows_));
  auto cols = columns_;
  cols[static_cast<std::size_t>(it - names_.begin())] = std::move(values);
  return Dataset(names_, std::move(cols));
}

Dataset Dataset::take_rows(const std::vector<std::size_t>& idx) const {
  std::vector<std::vector<double>> cols(columns_.size());
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    cols[c].reserve(idx.size());
    for (std::size_t r : idx) cols[c].push_back(columns_[c][r]);
  }
  return Dataset(names_, std::move(cols));
}

Dataset Dataset::bootstrap_sample(Rng& rng) const {
  if (rows_ == 0) throw ArgumentError("cannot bootstrap an empty dataset");
  std::vector<std::size_t> idx(rows_);
  for (auto& i : idx) i = rng.uniform_index(rows_);
  return take_rows(idx);
}

Dataset Dataset::subset_sample(double fraction, Rng& rng) const {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ArgumentError("subset fraction must lie in (0, 1], got " +
                        std::to_string(fraction));
  const auto k = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(rows_)));
  if (k == 0) throw ArgumentError("subset of an empty dataset");
  // Partial Fisher-Yates: first k entries are a uniform sample without
  // replacement.
  std::vector<std::size_t> idx(rows_);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i)
    std::swap(idx[i], idx[i + rng.uniform_index(rows_ - i)]);
  idx.resize(k);
  return take_rows(idx);
}

std::string Dataset::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < names_.size(); ++c) {
    if (c) out << ',';
    out << names_[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      if (c) out << ',';
      out << format_double(columns_[c][r]);
    }
    out << '\n';
  }
  return out.str();
}

void Dataset::save_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << to_csv();
  if (!out) throw IoError("write failure on '" + path + "'");
}

Dataset parse_csv(const std::string& text,
                  const std::set<std::string>& required_columns) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header row", 1, 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> names;
  {
    std::size_t start = 0;
    for (;;) {
      std::size_t comma = line.find(',', start);
      names.push_back(line.substr(
          start, comma == std::string::npos ? std::string::npos
                                            : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }

  {
    std::set<std::string> seen;
    for (const auto& n : names)
      if (!seen.insert(n).second)
        throw ParseError("duplicate column name '" + n + "'", 1, 1);
  }
  for (const auto& req : required_columns)
    if (std::find(names.begin(), names.end(), req) == names.end())
      throw ParseError("required column '" + req + "' is missing", 1, 1);

  std::vector<std::vector<double>> columns(names.size());
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t start = 0, col = 0;
    for (;;) {
      std::size_t comma = line.find(',', start);
      std::string cell = line.substr(
          start,
          comma == std::string::npos ? std::string::npos : comma - start);
      if (col >= names.size())
        throw ParseError("row has more fields than the header", lineno,
                         start + 1);
      double v = 0.0;
      auto [ptr, ec] =
          std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() ||
          !std::isfinite(v))
        throw ParseError("non-numeric value '" + cell + "' in column '" +
                             names[col] + "'",
                         lineno, start + 1);
      columns[col].push_back(v);
      ++col;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (col != names.size())
      throw ParseError("row has " + std::to_string(col) +
                           " fields, header has " +
                           std::to_string(names.size()),
                       lineno, 1);
  }

  return Dataset(std::move(names), std::move(columns));
}

Dataset load_csv(const std::string& path,
                 const std::set<std::string>& required_columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open data file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), required_columns);
}

}  // namespace causal
