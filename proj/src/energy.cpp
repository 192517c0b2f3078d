#include "elastodyne/energy.hpp"

namespace elastodyne {

double node_weight(const Layer& layer, FieldId f, int k) {
  const double h2 = layer.grid.h * layer.grid.h;
  return h2 * (subgrid_of(f).z == Stagger::N ? layer.sbpZ.aN()[k] : layer.sbpZ.aM()[k]);
}

double kinetic_energy(const Layer& l, const WavefieldState& s) {
  const medium::IsotropicMedium& med = l.med;
  double e = 0;
  for (FieldId f : {FieldId::vx, FieldId::vy, FieldId::vz}) {
    const Field3D& v = s[f];
    const Field3D& b = f == FieldId::vx ? med.bx : (f == FieldId::vy ? med.by : med.bz);
    const std::size_t np = v.plane();
    for (int k = 0; k < v.nz; ++k) {
      const double* vp = v.slice(k);
      const double* bp = b.slice(k);
      double acc = 0;
      for (std::size_t p = 0; p < np; ++p) acc += vp[p] * vp[p] / bp[p];
      e += node_weight(l, f, k) * acc;
    }
  }
  return 0.5 * e;
}

double compliance_product(const Layer& l, const WavefieldState& a, const WavefieldState& b) {
  const medium::IsotropicMedium& med = l.med;
  const std::size_t np = a[FieldId::sxx].plane();
  double e = 0;
  for (int k = 0; k < l.grid.nzN; ++k) {
    const double* ax = a[FieldId::sxx].slice(k);
    const double* ay = a[FieldId::syy].slice(k);
    const double* az = a[FieldId::szz].slice(k);
    const double* bx = b[FieldId::sxx].slice(k);
    const double* by = b[FieldId::syy].slice(k);
    const double* bz = b[FieldId::szz].slice(k);
    const double* lam = med.lam.slice(k);
    const double* mu = med.mu.slice(k);
    const double* axy = a[FieldId::sxy].slice(k);
    const double* bxy = b[FieldId::sxy].slice(k);
    const double* mxy = med.muxy.slice(k);
    double acc = 0, accS = 0;
    for (std::size_t p = 0; p < np; ++p) {
      const double c0 = 1.0 / (2 * mu[p]);
      const double c1 = lam[p] / (2 * mu[p] * (3 * lam[p] + 2 * mu[p]));
      acc += c0 * (ax[p] * bx[p] + ay[p] * by[p] + az[p] * bz[p]) -
             c1 * (ax[p] + ay[p] + az[p]) * (bx[p] + by[p] + bz[p]);
      accS += axy[p] * bxy[p] / mxy[p];
    }
    e += node_weight(l, FieldId::sxx, k) * acc + node_weight(l, FieldId::sxy, k) * accS;
  }
  for (FieldId f : {FieldId::sxz, FieldId::syz}) {
    const Field3D& mu = f == FieldId::sxz ? med.muxz : med.muyz;
    for (int k = 0; k < l.grid.nzM(); ++k) {
      const double* ap = a[f].slice(k);
      const double* bp = b[f].slice(k);
      const double* m = mu.slice(k);
      double acc = 0;
      for (std::size_t p = 0; p < np; ++p) acc += ap[p] * bp[p] / m[p];
      e += node_weight(l, f, k) * acc;
    }
  }
  return 0.5 * e;
}

double kinetic_energy(const Model& m, const StackState& s) {
  double e = 0;
  for (std::size_t i = 0; i < m.layers.size(); ++i) e += kinetic_energy(m.layers[i], s[i]);
  return e;
}

double compliance_product(const Model& m, const StackState& a, const StackState& b) {
  double e = 0;
  for (std::size_t i = 0; i < m.layers.size(); ++i) e += compliance_product(m.layers[i], a[i], b[i]);
  return e;
}

}  // namespace elastodyne
