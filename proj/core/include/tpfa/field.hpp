#ifndef TPFA_FIELD_HPP
#define TPFA_FIELD_HPP

#include <iosfwd>

#include <Eigen/Dense>

#include "tpfa/mesh.hpp"

namespace tpfa {

/// Member of the discrete space: one value per cell and per interior face,
/// boundary faces pinned to zero.
struct DiscreteField {
  const AdmissibleMesh* mesh = nullptr;
  Eigen::VectorXd cell;
  Eigen::VectorXd face;

  DiscreteField() = default;
  explicit DiscreteField(const AdmissibleMesh& m);

  /// Value on a face by global face index; boundary faces read zero.
  double face_value(int f) const;
  /// Jump u_sigma - u_K seen from cone c.
  double jump(int c) const;

  DiscreteField& operator+=(const DiscreteField& o);
  DiscreteField& operator-=(const DiscreteField& o);
  DiscreteField& operator*=(double s);
};

DiscreteField operator+(DiscreteField a, const DiscreteField& b);
DiscreteField operator-(DiscreteField a, const DiscreteField& b);
DiscreteField operator*(double s, DiscreteField a);

/// One scalar per cone, measured with the cone volumes |D_{K,sigma}|.
struct ConeField {
  const AdmissibleMesh* mesh = nullptr;
  Eigen::VectorXd val;

  ConeField() = default;
  explicit ConeField(const AdmissibleMesh& m);

  /// sqrt(sum_c |D_c| val_c^2)
  double l2_norm() const;
};

ConeField operator-(ConeField a, const ConeField& b);

/// L2 norm of a piecewise-constant cell vector.
double cell_l2_norm(const AdmissibleMesh& m, const Eigen::VectorXd& cells);

/// Writes `cell,<id>,<value>` rows then `face,<id>,<value>` rows (interior
/// faces under their global face index) at full round-trip precision.
void write_field_csv(std::ostream& os, const DiscreteField& u);

}  // namespace tpfa

#endif
