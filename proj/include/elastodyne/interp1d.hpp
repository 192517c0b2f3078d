#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace elastodyne::interp {

enum class GridKind { N, M };
enum class Direction { coarse_to_fine, fine_to_coarse };
enum class Variant { standard, alternative };

const char* to_string(GridKind k);
const char* to_string(Direction d);
const char* to_string(Variant v);

/// Spacing ratio fine:coarse = p:q. Besides the tabulated set
/// {1:2, 1:3, 2:3, 1:4, 3:4} the conforming 1:1 case is accepted (identity).
struct GridRatio {
  int p = 1;
  int q = 1;

  bool operator==(const GridRatio&) const = default;
  std::string str() const;
  bool conforming() const { return p == q; }

  /// Throws std::invalid_argument unless p:q is supported.
  static GridRatio make(int p, int q);
  /// Parses "p:q".
  static GridRatio parse(std::string_view text);
  /// Ratio implied by two spacings; throws if it is not a supported p:q.
  static GridRatio from_spacings(double fine, double coarse);
  static bool supported(int p, int q);
  /// The five tabulated non-conforming ratios.
  static std::vector<GridRatio> tabulated();
};

/// One output of an interpolation operator: weights against input indices.
/// Indices are unwrapped (may fall outside [0, nIn)); application wraps them
/// periodically, while the exactness check uses the unwrapped coordinates.
struct InterpRow {
  std::vector<int> idx;
  std::vector<double> w;
};

struct InterpOp1D {
  GridRatio ratio;
  GridKind kind = GridKind::N;
  Direction direction = Direction::coarse_to_fine;
  Variant variant = Variant::standard;
  int nIn = 0;
  int nOut = 0;
  std::vector<InterpRow> rows;

  int phases() const { return direction == Direction::coarse_to_fine ? ratio.q : ratio.p; }
  int nCoarse() const { return direction == Direction::coarse_to_fine ? nIn : nOut; }
  int nFine() const { return direction == Direction::coarse_to_fine ? nOut : nIn; }

  /// Coordinates in units of the coarse spacing, shared origin at the first N node.
  double in_coord(int i) const;
  double out_coord(int j) const;
  std::string name() const;
};

/// Periodic coarse-to-fine operator built from the tabulated stencil bank.
InterpOp1D build_coarse_to_fine(GridRatio ratio, GridKind kind, int nCoarse, Variant variant = Variant::standard);

/// T_f->c = A_c^-1 (A_f T_c->f)^T with diagonal weights aFine (length nFine), aCoarse (length nCoarse).
InterpOp1D derive_fine_to_coarse(const InterpOp1D& op, std::span<const double> aFine, std::span<const double> aCoarse);
/// Uniform-weight form used for the periodic horizontal directions.
InterpOp1D derive_fine_to_coarse(const InterpOp1D& op, double dxFine, double dxCoarse);

std::vector<double> apply_interp(const InterpOp1D& op, std::span<const double> values);
void apply_interp(const InterpOp1D& op, std::span<const double> values, std::span<double> out);

/// Worst |sum_k w_k (x_k - x_out)^d - [d == 0]| over rows, coordinates in coarse units.
double check_poly_exactness(const InterpOp1D& op, int degree);

/// max |aFine_j T_cf(j,i) - aCoarse_i T_fc(i,j)| with periodic index folding.
double reciprocity_residual(const InterpOp1D& c2f, const InterpOp1D& f2c, std::span<const double> aFine,
                            std::span<const double> aCoarse);

/// max |sum_k w_k - 1| over rows.
double row_sum_residual(const InterpOp1D& op);

}  // namespace elastodyne::interp
