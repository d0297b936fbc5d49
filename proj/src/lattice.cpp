#include "nmqa/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace nmqa {

QubitArray::QubitArray(Index rows, Index cols, double spacing)
    : rows_(rows), cols_(cols), spacing_(spacing) {
  if (rows < 1 || cols < 1) {
    throw InvalidArgument("grid dimensions must be positive");
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw InvalidArgument("grid spacing must be positive");
  }
  const Index d = rows * cols;
  sites_.resize(d, 2);
  for (Index s = 0; s < d; ++s) {
    sites_(s, 0) = static_cast<double>(s % cols) * spacing;
    sites_(s, 1) = static_cast<double>(s / cols) * spacing;
  }
  distances_.resize(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      distances_(i, j) = (sites_.row(i) - sites_.row(j)).norm();
    }
  }
}

double QubitArray::distance(Index i, Index j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size()) {
    throw InvalidArgument("site label out of range");
  }
  return distances_(i, j);
}

QubitArray build_grid(Index rows, Index cols, double spacing) {
  return QubitArray(rows, cols, spacing);
}

double distance(const QubitArray& array, Index i, Index j) { return array.distance(i, j); }

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::square2d:
      return "square2d";
    case FieldKind::step1d:
      return "step1d";
    case FieldKind::gaussian2d:
      return "gaussian2d";
    case FieldKind::external:
      return "external";
  }
  return "external";
}

FieldKind field_kind_from_string(std::string_view name) {
  if (name == "square2d") return FieldKind::square2d;
  if (name == "step1d") return FieldKind::step1d;
  if (name == "gaussian2d") return FieldKind::gaussian2d;
  if (name == "external") return FieldKind::external;
  throw InvalidArgument("unknown field kind '" + std::string(name) + "'");
}

namespace {

void check_phases(const VectorXd& values) {
  for (Index i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0 && values[i] <= kPi)) {
      throw InvalidArgument("field value at site " + std::to_string(i + 1) +
                            " outside [0, pi]");
    }
  }
}

}  // namespace

TrueField make_field(const QubitArray& array, FieldKind kind, double low, double high,
                     const FieldParams& params) {
  if (!(low >= 0.0 && low <= high && high <= kPi)) {
    throw InvalidArgument("field levels must satisfy 0 <= low <= high <= pi");
  }
  const Index d = array.size();
  TrueField field;
  field.kind = kind;
  field.values = VectorXd::Constant(d, low);

  switch (kind) {
    case FieldKind::square2d:
      for (Index s = 0; s < d; ++s) {
        const Index r = array.row_of(s);
        const Index c = array.col_of(s);
        if (r >= params.row_begin && r < params.row_end && c >= params.col_begin &&
            c < params.col_end) {
          field.values[s] = high;
        }
      }
      break;
    case FieldKind::step1d:
      for (Index s = params.split; s < d; ++s) {
        field.values[s] = high;
      }
      break;
    case FieldKind::gaussian2d: {
      if (!(params.sigma > 0.0)) {
        throw InvalidArgument("gaussian2d field needs sigma > 0");
      }
      const Eigen::RowVector2d centre(params.center_x, params.center_y);
      for (Index s = 0; s < d; ++s) {
        const double r2 = (array.sites().row(s) - centre).squaredNorm();
        const double v = low + (high - low) * std::exp(-r2 / (2.0 * params.sigma * params.sigma));
        field.values[s] = std::clamp(v, low, high);
      }
      break;
    }
    case FieldKind::external:
      if (params.values.size() != d) {
        throw InvalidArgument("external field has " + std::to_string(params.values.size()) +
                              " values for " + std::to_string(d) + " sites");
      }
      field.values = params.values;
      break;
  }
  check_phases(field.values);
  return field;
}

TrueField load_field_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open field file " + path.string());
  }
  std::vector<double> values;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::istringstream ss(line);
    double v = 0.0;
    if (!(ss >> v)) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": not a number");
    }
    values.push_back(v);
  }
  if (values.empty()) {
    throw FormatError(path.string() + ": no field values");
  }
  TrueField field;
  field.kind = FieldKind::external;
  field.values = Eigen::Map<const VectorXd>(values.data(), static_cast<Index>(values.size()));
  check_phases(field.values);
  return field;
}

}  // namespace nmqa
