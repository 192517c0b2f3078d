#include "elastodyne/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "elastodyne/energy.hpp"

namespace elastodyne {

StateLayout::StateLayout(const Model& m) {
  for (const Layer& l : m.layers)
    for (FieldId f : kAllFields) {
      offset.push_back(size);
      size += make_field(l.grid, subgrid_of(f)).size();
    }
}

void pack(const Model& m, const StackState& s, std::vector<double>& out) {
  out.clear();
  for (std::size_t i = 0; i < m.layers.size(); ++i)
    for (FieldId f : kAllFields) out.insert(out.end(), s[i][f].data.begin(), s[i][f].data.end());
}

void unpack(const Model& m, const std::vector<double>& in, StackState& s) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < m.layers.size(); ++i)
    for (FieldId f : kAllFields) {
      auto& d = s[i][f].data;
      if (pos + d.size() > in.size()) throw std::length_error("state vector too short");
      std::copy(in.begin() + pos, in.begin() + pos + d.size(), d.begin());
      pos += d.size();
    }
  if (pos != in.size()) throw std::length_error("state vector too long");
}

AssembledOperator assemble_operator(const Model& m, std::size_t maxUnknowns) {
  const StateLayout lay(m);
  if (lay.size > maxUnknowns)
    throw std::length_error("operator assembly limited to " + std::to_string(maxUnknowns) + " unknowns, model has " +
                            std::to_string(lay.size));
  const std::size_t n = lay.size;
  StackState probe = make_state(m);
  StackState rhs = make_state(m);
  std::vector<Eigen::Triplet<double>> tl;

  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    for (FieldId f : kAllFields) {
      Field3D& src = probe[li][f];
      const std::size_t base = lay.at(li, f);
      const bool vel = is_velocity(f);
      for (std::size_t q = 0; q < src.size(); ++q) {
        src.data[q] = 1.0;
        for (auto& st : rhs) st.zero();
        // Velocities drive the stress rates and vice versa.
        if (vel)
          stress_rates(m, probe, rhs);
        else
          velocity_rates(m, probe, rhs);
        for (std::size_t lj = 0; lj < m.layers.size(); ++lj)
          for (FieldId g : kAllFields) {
            if (is_velocity(g) == vel) continue;
            const auto& d = rhs[lj][g].data;
            const std::size_t rb = lay.at(lj, g);
            for (std::size_t r = 0; r < d.size(); ++r)
              if (d[r] != 0.0) tl.emplace_back(static_cast<int>(rb + r), static_cast<int>(base + q), d[r]);
          }
        src.data[q] = 0.0;
      }
    }
  }

  std::vector<Eigen::Triplet<double>> th;
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    const Layer& l = m.layers[li];
    const auto& med = l.med;
    for (FieldId f : {FieldId::vx, FieldId::vy, FieldId::vz}) {
      const Field3D& b = f == FieldId::vx ? med.bx : (f == FieldId::vy ? med.by : med.bz);
      const std::size_t base = lay.at(li, f);
      for (int k = 0; k < b.nz; ++k) {
        const double w = node_weight(l, f, k);
        for (std::size_t p = 0; p < b.plane(); ++p) {
          const std::size_t q = k * b.plane() + p;
          th.emplace_back(static_cast<int>(base + q), static_cast<int>(base + q), w / b.data[q]);
        }
      }
    }
    const std::size_t bxx = lay.at(li, FieldId::sxx), byy = lay.at(li, FieldId::syy), bzz = lay.at(li, FieldId::szz);
    const std::size_t np = med.lam.plane();
    for (int k = 0; k < l.grid.nzN; ++k) {
      const double w = node_weight(l, FieldId::sxx, k);
      for (std::size_t p = 0; p < np; ++p) {
        const std::size_t q = k * np + p;
        const double mu = med.mu.data[q], lam = med.lam.data[q];
        const double c0 = 1.0 / (2 * mu), c1 = lam / (2 * mu * (3 * lam + 2 * mu));
        const std::size_t idx[3] = {bxx + q, byy + q, bzz + q};
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b)
            th.emplace_back(static_cast<int>(idx[a]), static_cast<int>(idx[b]), w * ((a == b ? c0 : 0.0) - c1));
      }
    }
    for (FieldId f : {FieldId::sxy, FieldId::sxz, FieldId::syz}) {
      const Field3D& mu = f == FieldId::sxy ? med.muxy : (f == FieldId::sxz ? med.muxz : med.muyz);
      const std::size_t base = lay.at(li, f);
      for (int k = 0; k < mu.nz; ++k) {
        const double w = node_weight(l, f, k);
        for (std::size_t p = 0; p < mu.plane(); ++p) {
          const std::size_t q = k * mu.plane() + p;
          th.emplace_back(static_cast<int>(base + q), static_cast<int>(base + q), w / mu.data[q]);
        }
      }
    }
  }

  AssembledOperator op;
  op.L.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  op.L.setFromTriplets(tl.begin(), tl.end());
  op.H.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  op.H.setFromTriplets(th.begin(), th.end());
  return op;
}

SkewResidual skew_residual(const AssembledOperator& op) {
  const Eigen::SparseMatrix<double> hl = op.H * op.L;
  const Eigen::SparseMatrix<double> hlt = hl.transpose();
  const Eigen::SparseMatrix<double> sym = hl + hlt;
  SkewResidual r;
  for (Eigen::Index c = 0; c < hl.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(hl, c); it; ++it) r.scale = std::max(r.scale, std::abs(it.value()));
  for (Eigen::Index c = 0; c < sym.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sym, c); it; ++it)
      r.absolute = std::max(r.absolute, std::abs(it.value()));
  return r;
}

Model oracle_stack(interp::GridRatio ratio, bool fineAbove, interp::Variant v, iface::CouplingOptions opt) {
  const int p = ratio.p, q = ratio.q;
  const double hf = 1.0, hc = hf * q / p;
  const int ncx = p * ((4 + p - 1) / p), ncy = p * ((2 + p - 1) / p);
  LayerGrid coarse{ncx, ncy, 9, hc, 0.0};
  LayerGrid fine{ncx * q / p, ncy * q / p, 9, hf, 0.0};
  LayerGrid up = fineAbove ? fine : coarse, lo = fineAbove ? coarse : fine;
  lo.zTop = up.zBottom();
  const medium::MaterialFn smooth = [](double x, double y, double z) {
    return medium::Material{2000 + 150 * std::sin(0.3 * x) + 5 * z, 1000 + 60 * std::cos(0.2 * y + 0.1 * z),
                            1800 + 40 * std::sin(0.1 * (x + y))};
  };
  return build_model({up, lo}, {smooth, smooth}, v, opt);
}

}  // namespace elastodyne
