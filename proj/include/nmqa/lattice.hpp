#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "nmqa/common.hpp"

namespace nmqa {

/// Regular grid of qubit sites. Coordinates are in the same length unit as
/// `spacing`; site labels are 0-based and row-major.
class QubitArray {
 public:
  using Coordinates = Eigen::Matrix<double, Eigen::Dynamic, 2>;

  QubitArray() = default;
  QubitArray(Index rows, Index cols, double spacing);

  Index size() const { return sites_.rows(); }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  double spacing() const { return spacing_; }
  const Coordinates& sites() const { return sites_; }

  Index row_of(Index site) const { return site / cols_; }
  Index col_of(Index site) const { return site % cols_; }

  /// Pairwise separations, cached at construction.
  const MatrixXd& distances() const { return distances_; }
  double distance(Index i, Index j) const;

  /// Largest separation between any two sites (0 for a single site).
  double diameter() const { return distances_.size() == 0 ? 0.0 : distances_.maxCoeff(); }

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  double spacing_ = 1.0;
  Coordinates sites_;
  MatrixXd distances_;
};

QubitArray build_grid(Index rows, Index cols, double spacing);

double distance(const QubitArray& array, Index i, Index j);

enum class FieldKind { square2d, step1d, gaussian2d, external };

std::string_view to_string(FieldKind kind);
FieldKind field_kind_from_string(std::string_view name);

/// Shape parameters for make_field. Only the members relevant to the chosen
/// kind are read.
struct FieldParams {
  // square2d: half-open grid-index rectangle [row_begin, row_end) x [col_begin, col_end).
  Index row_begin = 0;
  Index row_end = 0;
  Index col_begin = 0;
  Index col_end = 0;
  // step1d: sites with row-major index < split are low.
  Index split = 0;
  // gaussian2d: bump centre (coordinates) and width.
  double center_x = 0.0;
  double center_y = 0.0;
  double sigma = 1.0;
  // external: verbatim per-site values.
  VectorXd values;
};

struct TrueField {
  VectorXd values;
  FieldKind kind = FieldKind::external;

  Index size() const { return values.size(); }
};

TrueField make_field(const QubitArray& array, FieldKind kind, double low, double high,
                     const FieldParams& params);

/// Reads d phases (radians), one per line.
TrueField load_field_csv(const std::filesystem::path& path);

}  // namespace nmqa
