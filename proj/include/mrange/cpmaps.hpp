// Linear maps M_n -> M_m stored by their values on matrix units, with the
// Choi-matrix machinery around them.
//
// Conventions (fixed and round-trip tested):
//   * Choi block (i, j), of size m x m, is phi(E_ij).
//   * A Kraus operator K (m x n) and a Choi eigenvector v in C^{nm} are
//     related by v[i*m + a] = K(a, i), so that Choi = sum_l v_l v_l^*
//     and phi(X) = sum_l K_l X K_l^*.
//   * Stinespring: V is (n*r) x m with V[i*r + l, a] = conj(K_l(a, i)),
//     and phi(X) = V^* (X kron I_r) V.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mrange/linalg.hpp"

namespace mrange {

class MapOnUnits {
public:
    MapOnUnits(int n, int m);
    // values[i*n + j] = phi(E_ij); each m x m.
    MapOnUnits(int n, int m, std::vector<CMat> values);

    static MapOnUnits identity(int n);
    static MapOnUnits transpose(int n);
    // Build from an arbitrary linear action X -> phi(X).
    static MapOnUnits from_action(int n, int m, const std::function<CMat(const CMat&)>& action);

    int n() const { return n_; }
    int m() const { return m_; }
    const CMat& at(int i, int j) const { return values_[static_cast<std::size_t>(i * n_ + j)]; }
    CMat& at(int i, int j) { return values_[static_cast<std::size_t>(i * n_ + j)]; }

    // phi(I) - I_m in Frobenius norm.
    double unital_defect() const;
    bool is_unital(double eps = 1e-9) const { return unital_defect() <= eps; }
    // max_ij |phi(E_ji) - phi(E_ij)^*|
    double selfadjoint_defect() const;

private:
    int n_;
    int m_;
    std::vector<CMat> values_;
};

struct ChoiMat {
    int n = 0;
    int m = 0;
    CMat block;  // nm x nm

    CMat block_at(int i, int j) const { return block.block(i * m, j * m, m, m); }
};

struct KrausSet {
    std::vector<CMat> operators;  // each m x n
};

struct StinespringForm {
    CMat v;  // (n*r) x m isometry
    int r = 0;
    int n = 0;
};

ChoiMat choi(const MapOnUnits& map);
MapOnUnits map_from_choi(const ChoiMat& c);

PsdResult is_cp(const MapOnUnits& map, const Tolerances& tol = default_tolerances());

KrausSet kraus_from_choi(const ChoiMat& c, const Tolerances& tol = default_tolerances());
MapOnUnits map_from_kraus(const KrausSet& kraus, int n);

StinespringForm stinespring(const MapOnUnits& map, const Tolerances& tol = default_tolerances());
// V^* (X kron I_r) V
CMat stinespring_apply(const StinespringForm& form, const CMat& x);

CMat apply(const MapOnUnits& map, const CMat& x);
// phi^{(k)}: applies phi blockwise to A in M_k(M_n).
CMat amplify(const MapOnUnits& map, int k, const CMat& a);

// sum_k A_k^* X_k A_k with X_k in M_n, A_k n x m and sum_k A_k^* A_k = I_m.
CMat cstar_convex(std::span<const CMat> xs, std::span<const CMat> as);

// Congruence by (I_n kron phi(I)^{-1/2}) on the Choi matrix: keeps complete
// positivity and makes the map exactly unital.
MapOnUnits unital_normalize(const MapOnUnits& map, const Tolerances& tol = default_tolerances());

}  // namespace mrange
