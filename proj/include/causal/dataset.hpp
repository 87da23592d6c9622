#ifndef CAUSAL_DATASET_HPP
#define CAUSAL_DATASET_HPP

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "causal/rng.hpp"

namespace causal {

// Immutable columnar table of 64-bit floats. Construction rejects NaN and
// infinite values, duplicate or malformed column names, and ragged
// columns, so a live Dataset is always rectangular and finite. All
// "mutating" operations return a new Dataset.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> names,
          std::vector<std::vector<double>> columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }

  const std::vector<std::string>& column_names() const { return names_; }
  bool has_column(const std::string& name) const;
  const std::vector<double>& column(const std::string& name) const;

  Dataset with_column(const std::string& name,
                      std::vector<double> values) const;
  Dataset replace_column(const std::string& name,
                         std::vector<double> values) const;

  // Same schema and row count, rows drawn i.i.d. with replacement.
  Dataset bootstrap_sample(Rng& rng) const;

  // ceil(fraction * rows) distinct rows chosen uniformly without
  // replacement, fraction in (0, 1].
  Dataset subset_sample(double fraction, Rng& rng) const;

  std::string to_csv() const;
  void save_csv(const std::string& path) const;

 private:
  Dataset take_rows(const std::vector<std::size_t>& idx) const;

  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::size_t rows_ = 0;
};

// Comma-separated, '.' decimal point, mandatory header line, no quoting.
// required_columns must all be present; every cell must parse as a finite
// double.
Dataset load_csv(const std::string& path,
                 const std::set<std::string>& required_columns = {});

Dataset parse_csv(const std::string& text,
                  const std::set<std::string>& required_columns = {});

}  // namespace causal

#endif
