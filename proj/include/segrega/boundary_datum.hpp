#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include "segrega/kernels.hpp"

namespace segrega {

/// Scalar boundary function on the unit circle, parameterized by angle.
using BoundaryFunction = std::function<double(double)>;

/// Counterclockwise arc [start, end) of the unit circle; 0 < end - start < 2pi.
struct Arc {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  /// Position of theta along the arc in [0, 1), or a value >= 1 when outside.
  double param(double theta) const { return normalize_angle(theta - start) / length(); }
};

enum class ProfileShape { BumpSin, BumpPoly, CustomSamples };

std::string_view to_string(ProfileShape shape);
ProfileShape profile_shape_from_string(std::string_view name);

/// Nonnegative bump supported on one arc. For CustomSamples the samples sit at
/// t = j/(n-1) along the arc, are linearly interpolated, and are scaled by
/// amplitude.
struct BoundaryProfile {
  ProfileShape shape = ProfileShape::BumpSin;
  double amplitude = 1.0;
  std::vector<double> samples;

  /// Value at arc parameter t in [0, 1]; zero outside.
  double eval(double t) const;
  double peak() const;
};

struct DatumOptions {
  /// Custom profiles must satisfy |d phi / d theta| <= lipschitz_factor * amplitude.
  double lipschitz_factor = 1e3;
  /// Allowed mismatch between adjacent arc endpoints.
  double tiling_tol = 1e-9;
};

/// k nonnegative boundary traces with pairwise disjoint arc supports whose
/// closures tile the circle. Immutable once built.
class AdmissibleDatum {
 public:
  static AdmissibleDatum build(int k, std::vector<Arc> arcs, std::vector<BoundaryProfile> profiles,
                               const DatumOptions& options = {});

  /// k equal arcs starting at `phase`, all with the same profile.
  static AdmissibleDatum symmetric(int k, double phase = 0.0, double amplitude = 1.0,
                                   ProfileShape shape = ProfileShape::BumpSin);

  int k() const { return static_cast<int>(arcs_.size()); }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<BoundaryProfile>& profiles() const { return profiles_; }
  /// Shared endpoints p_1..p_k, normalized to [0, 2pi); zeros()[i] starts arc i.
  const std::vector<double>& zeros() const { return zeros_; }

  /// Index of the species whose half-open support [p_i, p_{i+1}) holds theta.
  int species_at(double theta) const;
  /// phi_i(theta).
  double species(int i, double theta) const;
  /// sum_i phi_i(theta).
  double eval(double theta) const;
  double max_amplitude() const;

 private:
  AdmissibleDatum() = default;

  std::vector<Arc> arcs_;
  std::vector<BoundaryProfile> profiles_;
  std::vector<double> zeros_;
  std::vector<double> offsets_;  // normalize(zeros_[i] - zeros_[0]), increasing
};

/// Signed datum sum_j (-1)^j phi_j for an even species count k = 2s. Species
/// are numbered from 1, so the first arc carries a negative sign.
class AlternatingDatum {
 public:
  explicit AlternatingDatum(AdmissibleDatum base);

  /// 2s equal sin-bump arcs whose alternating datum is amplitude * cos(s theta).
  static AlternatingDatum cosine_mode(int s, double amplitude = 1.0);

  const AdmissibleDatum& base() const { return base_; }
  int k() const { return base_.k(); }
  int s() const { return base_.k() / 2; }
  /// (-1)^(i+1) for the 0-based species index i.
  static int sign(int i) { return (i % 2 == 0) ? -1 : 1; }

  double eval(double theta) const;
  BoundaryFunction function() const;

 private:
  AdmissibleDatum base_;
};

/// eval_alternating for an arbitrary datum; throws OddSpeciesCount for odd k.
double eval_alternating(const AdmissibleDatum& datum, double theta);

}  // namespace segrega
