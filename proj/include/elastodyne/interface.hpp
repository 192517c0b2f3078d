#pragma once

#include <array>
#include <vector>

#include "elastodyne/interp1d.hpp"
#include "elastodyne/wavefield3d.hpp"

namespace elastodyne::iface {

/// The six quantities whose continuity is imposed across a horizontal interface.
enum class Trace { vx, vy, vz, sxz, syz, szz };
inline constexpr int kTraceCount = 6;
const char* trace_name(Trace t);

struct CouplingOptions {
  /// Per-trace switch, indexed by Trace; used by the energy self-tests.
  std::array<bool, kTraceCount> enabled{true, true, true, true, true, true};
  /// Multiplies the 1/2 penalty coefficient.
  double penaltyScale = 1.0;
};

/// 2D interpolation as the tensor product of an x and a y operator.
struct TraceOp {
  interp::InterpOp1D x, y;
};

/// Horizontal staggering of a trace: 0 = (M,N), 1 = (N,M), 2 = (N,N).
int trace_kind(Trace t);

/// Coupling between an upper layer (whose bottom face is the interface) and
/// the lower layer below it (whose top face is the interface).
struct InterfaceCoupling {
  interp::GridRatio ratio;
  bool upperIsFine = false;
  std::array<TraceOp, 3> upperToLower;  // by trace_kind
  std::array<TraceOp, 3> lowerToUpper;
  CouplingOptions options;
};

InterfaceCoupling build_interface(const LayerGrid& upper, const LayerGrid& lower,
                                  interp::Variant variant = interp::Variant::standard, CouplingOptions options = {});

/// Applies op.x along x then op.y along y to an (op.x.nIn x op.y.nIn) array, x fastest.
void apply_trace_op(const TraceOp& op, const double* in, double* out);

/// Stress-phase penalties (velocity traces vx, vy, vz) added to the stress rates.
void add_stress_corrections(const Layer& upper, const Layer& lower, const WavefieldState& sU, const WavefieldState& sL,
                            const InterfaceCoupling& c, WavefieldState& rhsU, WavefieldState& rhsL);

/// Velocity-phase penalties (stress traces sxz, syz, szz) added to the velocity rates.
void add_velocity_corrections(const Layer& upper, const Layer& lower, const WavefieldState& sU,
                              const WavefieldState& sL, const InterfaceCoupling& c, WavefieldState& rhsU,
                              WavefieldState& rhsL);

/// Both phases.
void add_interface_corrections(const Layer& upper, const Layer& lower, const WavefieldState& sU,
                               const WavefieldState& sL, const InterfaceCoupling& c, WavefieldState& rhsU,
                               WavefieldState& rhsL);

/// Own-side trace of `t` on the top or bottom face (bottom if `bottomFace`).
std::vector<double> extract_trace(const WavefieldState& s, Trace t, bool bottomFace);

}  // namespace elastodyne::iface
