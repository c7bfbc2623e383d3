#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cqexp/entropy.hpp"
#include "cqexp/field.hpp"
#include "cqexp/matrix.hpp"

namespace cqexp {

class ProbabilityVector {
public:
    explicit ProbabilityVector(std::vector<double> p,
                               const Tolerances& tol = default_tolerances());

    static ProbabilityVector uniform(int n);

    int size() const { return static_cast<int>(p_.size()); }
    double operator[](int i) const { return p_[i]; }
    const std::vector<double>& values() const { return p_; }

private:
    std::vector<double> p_;
};

// Classical-input channel: one density matrix per input letter.
class CQChannel {
public:
    explicit CQChannel(std::vector<DensityMatrix> outputs,
                       const Tolerances& tol = default_tolerances());

    std::int64_t d() const { return static_cast<std::int64_t>(outputs_.size()); }
    int output_dim() const { return outputs_[0].dim(); }
    const DensityMatrix& output(std::int64_t z) const { return outputs_[z]; }
    const std::vector<DensityMatrix>& outputs() const { return outputs_; }

private:
    std::vector<DensityMatrix> outputs_;
};

// psi_ZB = sum_z P(z) |z><z| (x) phi_B(z), block diagonal on Z (x) B.
BipartiteState build_cq_state(const ProbabilityVector& p, const CQChannel& w);

// Pure state |psi> on A^n (x) A'^n (x) B^n (x) C^n with regrouped subsystem
// order and big-endian digit indexing (copy 1 is the most significant digit).
struct PurifiedSource {
    std::int64_t d = 2; // per-copy alphabet
    int copies = 1;
    int dim_b = 1; // per copy
    int dim_c = 1; // per copy
    std::vector<double> distribution; // per-copy P
    CVector amplitudes;

    std::int64_t dim_a_total() const;     // d^copies
    std::int64_t dim_aprime_total() const;
    std::int64_t dim_b_total() const;
    std::int64_t dim_c_total() const;
};

// |psi> = sum_z sqrt(P(z)) |z>_A |z>_A' |phi(z)>_BC, with mixed outputs
// purified into BC and C of minimal dimension (max rank over z).
PurifiedSource purify_source(const ProbabilityVector& p, const CQChannel& w,
                             const Tolerances& tol = default_tolerances(),
                             const Budget& budget = default_budget());

// |psi'> = sum_x sqrt(P(x)) |x~>_A |x>_A' |theta(x)>_BC where the BC
// purification is arranged so tr_B |theta(x)><theta(x)| equals the given
// output, i.e. the side information lives on C.
PurifiedSource build_conjugate_source(const ProbabilityVector& p, const CQChannel& w,
                                      const Tolerances& tol = default_tolerances(),
                                      const Budget& budget = default_budget());

enum class Subsystem { APrime, B, C };

// Classical register plus normalized conditional states on the kept
// subsystems; weights may be zero for impossible outcomes.
struct MeasuredBlocks {
    std::int64_t outcomes = 1;
    std::vector<double> weights;
    std::vector<Matrix> states;

    BipartiteState to_bipartite(const Tolerances& tol = default_tolerances()) const;
};

// Measure every A qudit in the Fourier basis |x~> = d^(-1/2) sum_z w^(xz) |z>,
// w = exp(2 pi i / d), keeping the listed subsystems.
MeasuredBlocks measure_conjugate_blocks(const PurifiedSource& psi,
                                        const std::vector<Subsystem>& keep);
BipartiteState measure_conjugate(const PurifiedSource& psi,
                                 const std::vector<Subsystem>& keep,
                                 const Tolerances& tol = default_tolerances());

// Same with the computational basis on A.
MeasuredBlocks measure_computational_blocks(const PurifiedSource& psi,
                                            const std::vector<Subsystem>& keep);

PurifiedSource tensor_power(const PurifiedSource& psi, int n,
                            const Budget& budget = default_budget());

// Basis permutation |z^n> -> |M z^n> on A^n; M invertible over Z_d.
PurifiedSource apply_linear_permutation(const PurifiedSource& psi, const FieldMatrix& m);

struct GroupAction {
    std::vector<Matrix> unitaries; // V(z), with phi(z) = V(z) phi(0) V(z)^dag
};

struct SymmetricChannel {
    CQChannel channel;
    GroupAction action;
};

// For all z, z': exactly one group element g with V(g) phi(z) V(g)^dag = phi(z').
bool is_symmetric(const CQChannel& w, const GroupAction& action,
                  const Tolerances& tol = default_tolerances());

enum class SymmetricFamily { GroupUnitaries, ClassicalSymmetric, DihedralQubit };

// Additive-noise classical channel over Z_d embedded diagonally; V(z) is the
// cyclic shift by z. The noise pmf must not be shift-invariant.
SymmetricChannel symmetric_channel_classical(const std::vector<double>& noise_pmf,
                                             const Tolerances& tol = default_tolerances());

// Qubit pure-state pair {|theta>, |-theta>} with the reflection V(1) = diag(1,-1).
SymmetricChannel symmetric_channel_dihedral(double theta,
                                            const Tolerances& tol = default_tolerances());

// Outputs generated from phi(0) by the supplied unitaries (V(0) must be id).
SymmetricChannel symmetric_channel_from_unitaries(const DensityMatrix& phi0,
                                                  std::vector<Matrix> unitaries,
                                                  const Tolerances& tol = default_tolerances());

// Search a candidate unitary set for a simply transitive action; nullopt if
// none of the candidate labellings certifies.
std::optional<GroupAction> find_action_over_candidates(const CQChannel& w,
                                                       const std::vector<Matrix>& candidates,
                                                       const Tolerances& tol = default_tolerances());

// BSC(p) embedded diagonally, certified symmetric via the bit flip.
SymmetricChannel bsc_channel(double p, const Tolerances& tol = default_tolerances());

} // namespace cqexp
