#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

namespace miscls {

// Column-role schema for CSV ingestion: names of the z columns that are
// discrete-coded. Continuous/discrete status is never inferred from data.
struct ColumnSchema {
  std::vector<std::string> discrete;
};

ColumnSchema load_schema(const std::string& json_path);

// Main-study sample with an internal validation subsample. Covariate columns
// are stored continuous-first, then discrete. y(i) is -1 outside the
// validation set. Immutable after construction.
struct Dataset {
  Eigen::MatrixXd z;                      // n x p
  std::vector<int> y_star;                // 0/1, length n
  std::vector<int> y;                     // 0/1 on validation rows, -1 elsewhere
  std::vector<char> in_validation;        // length n
  std::vector<int> validation_ids;        // sorted ascending
  int p1 = 0;                             // continuous covariates (leading columns)
  int p2 = 0;                             // discrete covariates (trailing columns)
  std::vector<std::string> column_names;  // stored order

  int n() const { return static_cast<int>(y_star.size()); }
  int p() const { return p1 + p2; }
  int n_validation() const { return static_cast<int>(validation_ids.size()); }
  double delta() const { return static_cast<double>(n_validation()) / n(); }

  // Throws std::invalid_argument when an invariant is broken.
  void validate() const;
};

Dataset load_csv_dataset(const std::string& csv_path, const ColumnSchema& schema);
void write_csv(const Dataset& ds, const std::string& csv_path);

// Covariate-only table for prediction inputs; columns taken in file order.
struct CovariateTable {
  Eigen::MatrixXd z;
  std::vector<std::string> column_names;
  std::vector<int> y;  // -1 when the file has no response column
};
CovariateTable load_covariate_csv(const std::string& csv_path);

// Re-draws the validation membership of a fully observed dataset: keeps
// ceil(delta*n) uniformly sampled rows as validated, erases y elsewhere.
Dataset make_validation_split(const Dataset& ds, double delta, std::uint64_t seed);

}  // namespace miscls
