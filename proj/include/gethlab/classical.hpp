#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

// Mean-field (N -> infinity) limit of the trimer: q_i, p_i with sum(q^2 + p^2) = 2.
namespace gethlab::classical {

using cplx = std::complex<double>;

struct Coupling {
    double J = 1.0;
    double U = -5.0;
};

struct ClassicalState {
    std::array<double, 3> q{};
    std::array<double, 3> p{};

    double norm2() const;  // sum q^2 + p^2
};

/// H/N = sum_i [ -J (q_{i+1} q_i + p_{i+1} p_i) + (U/4) (q_i^2 + p_i^2)^2 ]
double hamiltonian(const ClassicalState& s, const Coupling& c);

struct ObservableValues {
    cplx imbalance;        // I/N
    double current = 0;    // C/N
    double hopping12 = 0;  // h12/N
};
ObservableValues observables(const ClassicalState& s);

/// dq_i/dt = d(H/N)/dp_i, dp_i/dt = -d(H/N)/dq_i, packed as (dq, dp).
ClassicalState equations_of_motion(const ClassicalState& s, const Coupling& c);

/// Same right-hand side on a packed (q1,q2,q3,p1,p2,p3) array for any arithmetic type.
template <class T>
void hamilton_rhs(const T* y, T* dy, const T& J, const T& U) {
    for (int i = 0; i < 3; ++i) {
        const int next = (i + 1) % 3;
        const int prev = (i + 2) % 3;
        const T occ = y[i] * y[i] + y[3 + i] * y[3 + i];
        dy[i] = -J * (y[3 + next] + y[3 + prev]) + U * occ * y[3 + i];
        dy[3 + i] = J * (y[next] + y[prev]) - U * occ * y[i];
    }
}

enum class Mode { fast, paper };

struct IntegrationConfig {
    Mode mode = Mode::fast;
    double t_max = 1000.0;
    double t_transient = 100.0;     // averages use t in [t_transient, t_max]
    double sample_interval = 0.1;
    double rtol = 5e-14;            // fast mode error control
    double atol = 1e-15;
    double fixed_step = 5e-4;       // paper mode
    double max_drift = 1e-8;        // energy and norm; larger drift marks the run invalid
    bool track_chaos = true;
    double twin_perturbation = 1e-10;   // fast mode twin separation
    double renormalize_every = 1.0;     // fast mode twin renormalization period
    double fast_threshold = 0.22;       // divergence rate above which a fast-mode run is chaotic
    double paper_threshold = 0.3;       // mean 20- vs 25-digit distance above which a run is chaotic
    double imbalance_bound = 0.1;
    double current_bound = 0.17320508075688773;
};

struct TrajectoryResult {
    std::uint64_t index = 0;
    ClassicalState initial;
    double energy = 0.0;  // H/N at t = 0
    cplx avg_imbalance;
    double avg_current = 0.0;
    double avg_hopping12 = 0.0;
    double chaos_metric = 0.0;  // divergence rate (fast) or mean distance (paper)
    bool chaotic = false;
    bool breaks_rotation = false;
    bool breaks_reflection = false;
    bool valid = true;
    double energy_drift = 0.0;
    double norm_drift = 0.0;
    std::size_t steps = 0;
    std::string failure;
};

/// Integrates one trajectory. `twin_key` seeds the direction of the fast-mode twin perturbation.
TrajectoryResult integrate(const ClassicalState& initial, const Coupling& c, const IntegrationConfig& cfg,
                           std::uint64_t twin_key = 0);

/// Plain trajectory (no averaging) to time t with the adaptive integrator; for reversibility checks.
ClassicalState propagate(const ClassicalState& initial, const Coupling& c, double t, double rtol = 5e-14,
                         double atol = 1e-15);

/// Paper-mode kernel: fixed-step RK4 at 20 and 25 significant digits (classical_extended.cpp).
TrajectoryResult integrate_extended(const ClassicalState& initial, const Coupling& c, const IntegrationConfig& cfg);

/// Uniform states on the sphere sum(q^2+p^2) = 2, rejection-filtered to |H/N - E| <= deltaE.
/// State k comes from its own random stream (seed, k). Throws NumericalError when the
/// energy window is (practically) unreachable.
std::vector<ClassicalState> sample_initial_conditions(const Coupling& c, double E, double deltaE, int count,
                                                      std::uint64_t seed);

struct EnsembleConfig {
    double energy = -2.7;
    double deltaE = 0.05;
    int count = 200;
    std::uint64_t seed = 1;
};

/// Samples and integrates an ensemble; OpenMP-parallel over trajectories, results in index order.
std::vector<TrajectoryResult> run_ensemble(const Coupling& c, const EnsembleConfig& ens, const IntegrationConfig& cfg);

struct EnsembleSummary {
    std::size_t total = 0;
    std::size_t valid = 0;
    double chaos_fraction = 0.0;
    double fraction_imbalance = 0.0;  // breaks rotation
    double fraction_current = 0.0;    // breaks reflection
};

/// Shares among valid trajectories; invalid ones are excluded and counted.
EnsembleSummary summarize(const std::vector<TrajectoryResult>& results);
double chaos_fraction(const std::vector<TrajectoryResult>& results);
std::pair<double, double> symmetry_breaking_fraction(const std::vector<TrajectoryResult>& results);

/// Centroids of valid long-time I/N averages in the three 2pi/3 angular sectors centred on
/// arg = 0, 2pi/3, 4pi/3. Empty sectors give NaN.
struct ImbalanceClusters {
    std::array<cplx, 3> centroids;
    std::array<std::size_t, 3> counts{};
    /// max_k |omega * centroid_k - centroid_{k+1}|
    double rotation_mismatch() const;
};
ImbalanceClusters imbalance_clusters(const std::vector<TrajectoryResult>& results);

/// Threshold on the fast-mode divergence rate that best reproduces paper-mode labels.
/// `fast` and `paper` must describe the same initial conditions in the same order.
double calibrate_fast_threshold(const std::vector<TrajectoryResult>& fast, const std::vector<TrajectoryResult>& paper);

}  // namespace gethlab::classical
