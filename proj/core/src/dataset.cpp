#include "miscls/dataset.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "miscls/rng.hpp"

namespace miscls {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "na"; }

double parse_double(const std::string& s, std::size_t row, const std::string& col) {
  const char* begin = s.data();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw std::invalid_argument("invalid numeric value '" + s + "' in column " + col + " at row " +
                                std::to_string(row));
  }
  return v;
}

int parse_binary(const std::string& s, std::size_t row, const std::string& col) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw std::invalid_argument("non-binary response at row " + std::to_string(row) + " (column " +
                              col + ", value '" + s + "')");
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

ColumnSchema load_schema(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw std::invalid_argument("cannot open schema file: " + json_path);
  nlohmann::json j;
  in >> j;
  ColumnSchema schema;
  if (j.contains("discrete")) {
    for (const auto& name : j.at("discrete")) schema.discrete.push_back(name.get<std::string>());
  }
  return schema;
}

void Dataset::validate() const {
  const int nn = n();
  if (nn == 0) throw std::invalid_argument("dataset is empty");
  if (p() < 1) throw std::invalid_argument("dataset needs at least one covariate");
  if (z.rows() != nn || z.cols() != p()) throw std::invalid_argument("covariate matrix shape mismatch");
  if (static_cast<int>(y.size()) != nn || static_cast<int>(in_validation.size()) != nn) {
    throw std::invalid_argument("response vector length mismatch");
  }
  if (validation_ids.empty()) {
    throw std::invalid_argument("dataset has no validated rows (validation ratio must be in (0,1])");
  }
  for (int i = 0; i < nn; ++i) {
    if (y_star[i] != 0 && y_star[i] != 1) {
      throw std::invalid_argument("non-binary response at row " + std::to_string(i + 1));
    }
    if (in_validation[i]) {
      if (y[i] != 0 && y[i] != 1) {
        throw std::invalid_argument("validated row " + std::to_string(i + 1) + " lacks a binary y");
      }
    } else if (y[i] != -1) {
      throw std::invalid_argument("non-validated row " + std::to_string(i + 1) + " carries a y value");
    }
    for (int c = 0; c < p(); ++c) {
      if (!std::isfinite(z(i, c))) {
        throw std::invalid_argument("missing covariate in row " + std::to_string(i + 1));
      }
    }
  }
}

Dataset load_csv_dataset(const std::string& csv_path, const ColumnSchema& schema) {
  std::ifstream in(csv_path);
  if (!in) throw std::invalid_argument("cannot open data file: " + csv_path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty file: " + csv_path);
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  int y_star_col = -1, y_col = -1;
  std::vector<int> z_cols;
  std::vector<std::string> z_names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "y_star") {
      y_star_col = static_cast<int>(c);
    } else if (header[c] == "y") {
      y_col = static_cast<int>(c);
    } else {
      z_cols.push_back(static_cast<int>(c));
      z_names.push_back(header[c]);
    }
  }
  if (y_star_col < 0) throw std::invalid_argument("missing required column y_star in " + csv_path);
  if (z_cols.empty()) throw std::invalid_argument("no covariate columns in " + csv_path);

  std::unordered_set<std::string> discrete(schema.discrete.begin(), schema.discrete.end());
  for (const auto& d : discrete) {
    if (std::find(z_names.begin(), z_names.end(), d) == z_names.end()) {
      throw std::invalid_argument("schema lists unknown discrete column: " + d);
    }
  }

  // Reorder to continuous-first, preserving relative order within each block.
  std::vector<int> order;
  for (std::size_t k = 0; k < z_cols.size(); ++k) {
    if (!discrete.count(z_names[k])) order.push_back(static_cast<int>(k));
  }
  const int p1 = static_cast<int>(order.size());
  for (std::size_t k = 0; k < z_cols.size(); ++k) {
    if (discrete.count(z_names[k])) order.push_back(static_cast<int>(k));
  }

  std::vector<std::vector<double>> z_rows;
  std::vector<int> y_star, y;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("row " + std::to_string(row) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()));
    }
    for (auto& f : fields) f = trim(f);
    y_star.push_back(parse_binary(fields[y_star_col], row, "y_star"));
    if (y_col >= 0 && !is_missing(fields[y_col])) {
      y.push_back(parse_binary(fields[y_col], row, "y"));
    } else {
      y.push_back(-1);
    }
    std::vector<double> zr(z_cols.size());
    for (std::size_t k = 0; k < z_cols.size(); ++k) {
      const auto& f = fields[z_cols[order[k]]];
      if (is_missing(f)) {
        throw std::invalid_argument("missing covariate in row " + std::to_string(row));
      }
      zr[k] = parse_double(f, row, z_names[order[k]]);
    }
    z_rows.push_back(std::move(zr));
  }
  if (z_rows.empty()) throw std::invalid_argument("no data rows in " + csv_path);

  Dataset ds;
  ds.p1 = p1;
  ds.p2 = static_cast<int>(z_cols.size()) - p1;
  ds.y_star = std::move(y_star);
  ds.y = std::move(y);
  for (int k : order) ds.column_names.push_back(z_names[k]);
  const int n = static_cast<int>(z_rows.size());
  ds.z.resize(n, static_cast<int>(z_cols.size()));
  for (int i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < z_rows[i].size(); ++c) ds.z(i, static_cast<int>(c)) = z_rows[i][c];
  }
  ds.in_validation.resize(n, 0);
  for (int i = 0; i < n; ++i) {
    if (ds.y[i] >= 0) {
      ds.in_validation[i] = 1;
      ds.validation_ids.push_back(i);
    }
  }
  ds.validate();
  return ds;
}

void write_csv(const Dataset& ds, const std::string& csv_path) {
  std::ofstream out(csv_path);
  if (!out) throw std::invalid_argument("cannot write file: " + csv_path);
  out << "y_star,y";
  for (const auto& name : ds.column_names) out << ',' << name;
  out << '\n';
  for (int i = 0; i < ds.n(); ++i) {
    out << ds.y_star[i] << ',';
    if (ds.in_validation[i]) out << ds.y[i];
    for (int c = 0; c < ds.p(); ++c) out << ',' << format_double(ds.z(i, c));
    out << '\n';
  }
}

CovariateTable load_covariate_csv(const std::string& csv_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::invalid_argument("cannot open data file: " + csv_path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty file: " + csv_path);
  auto header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  int y_col = -1;
  std::vector<int> z_cols;
  CovariateTable table;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "y") {
      y_col = static_cast<int>(c);
    } else if (header[c] != "y_star") {
      z_cols.push_back(static_cast<int>(c));
      table.column_names.push_back(header[c]);
    }
  }
  if (z_cols.empty()) throw std::invalid_argument("no covariate columns in " + csv_path);

  std::vector<std::vector<double>> z_rows;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw std::invalid_argument("row " + std::to_string(row) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(header.size()));
    }
    for (auto& f : fields) f = trim(f);
    if (y_col >= 0) {
      table.y.push_back(is_missing(fields[y_col]) ? -1 : parse_binary(fields[y_col], row, "y"));
    } else {
      table.y.push_back(-1);
    }
    std::vector<double> zr(z_cols.size());
    for (std::size_t k = 0; k < z_cols.size(); ++k) {
      zr[k] = parse_double(fields[z_cols[k]], row, table.column_names[k]);
    }
    z_rows.push_back(std::move(zr));
  }
  const int n = static_cast<int>(z_rows.size());
  if (n == 0) throw std::invalid_argument("no data rows in " + csv_path);
  table.z.resize(n, static_cast<int>(z_cols.size()));
  for (int i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < z_rows[i].size(); ++c) {
      table.z(i, static_cast<int>(c)) = z_rows[i][c];
    }
  }
  return table;
}

Dataset make_validation_split(const Dataset& ds, double delta, std::uint64_t seed) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("validation ratio must lie in (0,1]");
  }
  for (int i = 0; i < ds.n(); ++i) {
    if (ds.y[i] < 0) {
      throw std::invalid_argument("make_validation_split requires y on every row");
    }
  }
  const int n = ds.n();
  const int nv = static_cast<int>(std::ceil(delta * n));

  // Partial Fisher-Yates over row positions; depends only on (n, seed).
  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  auto rng = make_stream(seed, 1);
  for (int k = 0; k < nv; ++k) {
    std::uniform_int_distribution<int> pick(k, n - 1);
    std::swap(ids[k], ids[pick(rng)]);
  }
  ids.resize(nv);
  std::sort(ids.begin(), ids.end());

  Dataset out = ds;
  out.validation_ids = ids;
  std::fill(out.in_validation.begin(), out.in_validation.end(), 0);
  std::fill(out.y.begin(), out.y.end(), -1);
  for (int i : ids) {
    out.in_validation[i] = 1;
    out.y[i] = ds.y[i];
  }
  out.validate();
  return out;
}

}  // namespace miscls
