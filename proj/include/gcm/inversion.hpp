#ifndef GCM_INVERSION_HPP
#define GCM_INVERSION_HPP

#include <optional>
#include <string>
#include <vector>

#include "gcm/cwf.hpp"
#include "gcm/elliptic.hpp"
#include "gcm/fdtd.hpp"
#include "gcm/grid.hpp"
#include "gcm/laplace.hpp"
#include "gcm/preprocess.hpp"
#include "gcm/waveform.hpp"

namespace gcm {

enum class InversionMode { Test1, Test2 };
enum class TailMode { DirectS, TimeDomain };

const char* inversion_mode_name(InversionMode m);
InversionMode parse_inversion_mode(const std::string& s);
const char* tail_mode_name(TailMode m);
TailMode parse_tail_mode(const std::string& s);

struct StoppingConfig {
    InversionMode mode = InversionMode::Test1;
    int i_max = 8;

    static StoppingConfig for_mode(InversionMode m);
};

enum class StopDecision { Continue, StopInner, StopOuter };

/// Inner rule: stop once D stops decreasing or i reaches i_max.
StopDecision inner_stopping_check(const std::vector<double>& d_inner, const StoppingConfig& cfg);
/// Outer rule: stop once the sequence has passed its first local minimum.
/// The minimum sits at index size()-2 when this returns StopOuter.
StopDecision outer_stopping_check(const std::vector<double>& d_outer);

/// Smooth cutoff: product of per-axis ramps clamp((d - 1)/2, 0, 1), with d
/// the distance in cells to the nearest face of the box. 1 on the box
/// shrunk by 3 cells, 0 on its boundary.
ScalarField cutoff_chi(const Grid3D& omega_grid);

/// Omega' membership (chi == 1).
bool in_omega_prime(const Grid3D& omega_grid, int i, int j, int k);

/// Field gradient with centered differences at interior nodes, one-sided
/// on the boundary.
std::array<ScalarField, 3> gradient(const ScalarField& f);

/// lap v + s^2 |grad v|^2 at interior nodes; boundary nodes are set to 1.
ScalarField epsilon_raw(const ScalarField& v, double s);

struct EpsilonUpdate {
    ScalarField eps;      ///< clipped, on Omega
    ScalarField eps_bar;  ///< blended with chi, on Omega
};

EpsilonUpdate epsilon_from_v(const ScalarField& v, double s_eval, const ScalarField& chi, double eps_lower = 1.0);

/// v = -h q - qbar + V
ScalarField update_v(const ScalarField& q, const ScalarField& qbar, const ScalarField& V, double h);

struct QSolveResult {
    ScalarField q;
    EllipticResult solve;
};

QSolveResult solve_qn(const ScalarField& V, const ScalarField& qbar, const std::vector<double>& psi_n,
                      const CwfCoefficients& coeffs, double tolerance = 1e-8);

struct TailConfig {
    TailMode mode = TailMode::DirectS;
    SimConfig sim;
    Waveform waveform;
};

/// Tail V = ln w(s_bar)/s_bar^2 on Omega for the coefficient eps_bar given on
/// Omega (eps = 1 elsewhere in G).
ScalarField tail_update(const ScalarField& eps_bar_omega, const Grid3D& G, const IndexBox& omega, double s_bar,
                        const TailConfig& cfg, ScalarField* w_out = nullptr);

/// p harmonic with p = -s_bar^2 psi(s_bar) on the boundary, V = p/s_bar.
ScalarField initial_tail_test1(const BoundaryData& bd, double tolerance = 1e-10);

struct Test2Init {
    ScalarField tail;
    ScalarField eps0;  ///< on Omega
    bool fell_back = false;
};

/// eps0 = eps_u inside the extended target box, 1 elsewhere; tail from w at
/// s_bar. An empty cross section falls back to the Test 1 tail.
Test2Init initial_tail_test2(const BoundaryData& bd, const CrossSection& gamma_t, double z_front,
                             const Grid3D& G, const IndexBox& omega, const TailConfig& tail_cfg,
                             double eps_u = 25.0, double lateral_margin = 0.03, double depth_margin = 0.02);

struct InversionConfig {
    PseudoFrequencyGrid sgrid;
    double lambda = 20.0;
    StoppingConfig stopping;
    TailConfig tail;
    double eps_lower = 1.0;
    double eps_u = 25.0;
    double elliptic_tolerance = 1e-8;
    bool keep_snapshots = false;
    bool outer_stopping = true;
};

struct IterateRecord {
    int n = 0;
    int i = 0;
    double D = 0.0;
    double eps_min = 0.0;
    double eps_max = 0.0;
    double eps_max_prime = 0.0;  ///< max over Omega'
    double eps_min_prime = 0.0;
    int elliptic_iterations = 0;
    bool elliptic_converged = true;
};

struct InversionInputs {
    BoundaryData data;
    Grid3D G;
    IndexBox omega;
    std::optional<CrossSection> gamma_t;
    double z_front = 0.0;
};

struct InversionReport {
    std::vector<IterateRecord> iterates;
    std::vector<double> d_outer;
    int n_stop = 0;
    ScalarField eps;       ///< clipped eps on Omega at the stopping iterate
    ScalarField eps_bar;   ///< blended
    ScalarField initial_tail;
    bool test1_fallback = false;
    std::vector<ScalarField> eps_history;  ///< per n, when keep_snapshots
    std::vector<std::string> warnings;
};

/// D = L2(Gamma_p) norm of V - V_prop on the measured face.
double tail_misfit(const ScalarField& V, const BoundaryData& bd);

InversionReport run_inversion(const InversionInputs& in, const InversionConfig& cfg);

/// Reported target eps = ratio * eps_sand and n = sqrt(eps).
struct TargetValue {
    double eps = 0.0;
    double n = 0.0;
};
TargetValue target_ratio_to_epsilon(double ratio, double eps_sand = 4.0);

enum class ShapeKind { Strong, Weak };

/// Keep eps where (x, y) is in gamma_t and eps > gamma*max (strong) or
/// eps < gamma*min (weak); fill elsewhere.
ScalarField truncate_shape(const ScalarField& eps, const CrossSection& gamma_t, double gamma, ShapeKind kind,
                           double fill = 4.0);

}  // namespace gcm

#endif
