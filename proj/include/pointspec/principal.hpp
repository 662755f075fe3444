#ifndef POINTSPEC_PRINCIPAL_HPP
#define POINTSPEC_PRINCIPAL_HPP

// The renormalized principal matrix Phi(E) at E = -nu^2:
//   Phi_ii = int_0^inf K_t(a_i, a_i) (e^{-t mu_i^2} - e^{-t nu^2}) dt
//   Phi_ij = -int_0^inf K_t(a_i, a_j) e^{-t nu^2} dt          (i != j)
// together with its nu-derivative and the resolvent-difference identity.

#include <vector>

#include "pointspec/manifold.hpp"
#include "pointspec/smallmat.hpp"

namespace pointspec {

struct Center {
  Point point;
  double mu = 1.0;  // single-center binding scale, E_bind = -mu^2
};

class CenterSet {
 public:
  CenterSet(const ManifoldSpec& m, std::vector<Center> centers);

  const ManifoldSpec& manifold() const { return m_; }
  int size() const { return static_cast<int>(centers_.size()); }
  const Center& operator[](int i) const { return centers_[static_cast<std::size_t>(i)]; }
  double distance(int i, int j) const {
    return dist_[static_cast<std::size_t>(i) * centers_.size() + j];
  }
  double min_pair_distance() const { return min_dist_; }  // +inf for N = 1
  double mu_max() const;
  double mu_min() const;
  // natural energy scale mu_d = 1/d, d = min pair distance
  double mu_d() const;

  CenterSet without_last() const;

 private:
  ManifoldSpec m_;
  std::vector<Center> centers_;
  std::vector<double> dist_;
  double min_dist_;
};

struct PrincipalMatrix {
  double nu = 0.0;
  SymMatrix entries;
};

// minimal nu on compact manifolds (the diagonal diverges to -inf as nu -> 0)
inline constexpr double kNuMinCompact = 1e-6;

double phi_diagonal(const ManifoldSpec& m, const Point& a, double mu,
                    double nu, const QuadratureConfig& quad);
double phi_offdiagonal(const ManifoldSpec& m, const Point& ai, const Point& aj,
                       double nu, const QuadratureConfig& quad);
double phi_offdiagonal_radial(const ManifoldSpec& m, double d, double nu,
                              const QuadratureConfig& quad);

PrincipalMatrix assemble(const ManifoldSpec& m, const CenterSet& cs, double nu,
                         const QuadratureConfig& quad);

// d Phi_ij / d nu = int_0^inf 2 nu t K_t(a_i,a_j) e^{-t nu^2} dt; the
// diagonal derivative does not depend on mu.
double phi_derivative_nu(const ManifoldSpec& m, const Point& ai,
                         const Point& aj, double nu,
                         const QuadratureConfig& quad);
double phi_derivative_nu_radial(const ManifoldSpec& m, double d, double nu,
                                const QuadratureConfig& quad);

SymMatrix assemble_derivative(const ManifoldSpec& m, const CenterSet& cs,
                              double nu, const QuadratureConfig& quad);

// normalization bracket entries int_0^inf t K_t(a_i,a_j) e^{-t nu^2} dt
SymMatrix assemble_norm_matrix(const ManifoldSpec& m, const CenterSet& cs,
                               double nu, const QuadratureConfig& quad);

// | (Phi_ij(E2) - Phi_ij(E1)) - (R0(E1) - R0(E2)) |, the Appendix-style
// numerical invariant; Phi and R0 follow independent discretizations.
double resolvent_difference_check(const ManifoldSpec& m, const CenterSet& cs,
                                  int i, int j, double e1, double e2,
                                  const QuadratureConfig& quad);

}  // namespace pointspec

#endif
