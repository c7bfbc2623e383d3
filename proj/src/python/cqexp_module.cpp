#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cqexp/discrimination.hpp"
#include "cqexp/entropy.hpp"
#include "cqexp/experiments.hpp"
#include "cqexp/exponents.hpp"
#include "cqexp/spec_io.hpp"

namespace py = pybind11;
using namespace cqexp;

namespace {

double extended_to_float(const ExtendedReal& v) { return v.to_double(); }

CQChannel make_channel(const std::vector<Matrix>& outputs) {
    std::vector<DensityMatrix> validated;
    validated.reserve(outputs.size());
    for (const Matrix& m : outputs) validated.emplace_back(m);
    return CQChannel(std::move(validated));
}

BipartiteState make_bipartite(const Matrix& state, int dim_a, int dim_b) {
    return BipartiteState(DensityMatrix(state), dim_a, dim_b);
}

Source make_source(const std::vector<double>& p, const std::vector<Matrix>& outputs) {
    return Source{ProbabilityVector(p), make_channel(outputs)};
}

FieldMatrix make_field_matrix(std::int64_t d, const std::vector<std::vector<std::int64_t>>& rows) {
    if (rows.empty()) throw ValidationError("field matrix needs explicit shape when empty");
    const int cols = static_cast<int>(rows[0].size());
    std::vector<std::int64_t> flat;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != cols) {
            throw ValidationError("field matrix rows must have equal length");
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return FieldMatrix(d, static_cast<int>(rows.size()), cols, std::move(flat));
}

py::dict curve_point_dict(const CurvePoint& p) {
    py::dict out;
    out["rate"] = p.rate;
    out["exponent"] = extended_to_float(p.exponent);
    out["optimizer"] = p.optimizer;
    out["flag"] = to_string(p.flag);
    return out;
}

py::dict certified_dict(const CertifiedValue& v) {
    py::dict out;
    out["lower"] = v.lower;
    out["upper"] = v.upper;
    out["gap"] = v.gap();
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "error-exponent bounds and duality checks for classical-quantum sources";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    // Matrix toolbox.
    m.def("mat_pow", [](const Matrix& a, double p) { return mat_pow(a, p); },
          py::arg("a"), py::arg("p"));
    m.def("fidelity", [](const Matrix& rho, const Matrix& sigma) {
        return fidelity(rho, sigma);
    });
    m.def("trace_norm", [](const Matrix& a) { return trace_norm(a); });
    m.def("partial_trace", [](const Matrix& rho, const std::vector<int>& dims,
                              const std::vector<int>& keep) {
        return partial_trace(rho, dims, keep);
    });

    // Entropies. States are passed as (matrix, dimA, dimB) triples.
    m.def("petz_divergence", [](const Matrix& rho, const Matrix& sigma, double alpha) {
        return extended_to_float(
            petz_divergence(DensityMatrix(rho), DensityMatrix(sigma), alpha));
    });
    m.def("sandwiched_divergence", [](const Matrix& rho, const Matrix& sigma, double alpha) {
        return extended_to_float(
            sandwiched_divergence(DensityMatrix(rho), DensityMatrix(sigma), alpha));
    });
    m.def("umegaki_divergence", [](const Matrix& rho, const Matrix& sigma) {
        return extended_to_float(umegaki_divergence(DensityMatrix(rho), DensityMatrix(sigma)));
    });
    m.def("sibson_optimizer", [](const Matrix& state, int dim_a, int dim_b, double alpha) {
        return sibson_optimizer(make_bipartite(state, dim_a, dim_b), alpha).matrix();
    });
    m.def("cond_entropy_petz_up", [](const Matrix& state, int dim_a, int dim_b, double alpha) {
        return cond_entropy_petz_up(make_bipartite(state, dim_a, dim_b), alpha);
    });
    m.def("cond_entropy_sand_down", [](const Matrix& state, int dim_a, int dim_b, double alpha) {
        return cond_entropy_sand_down(make_bipartite(state, dim_a, dim_b), alpha);
    });
    m.def("von_neumann_cond", [](const Matrix& state, int dim_a, int dim_b) {
        return von_neumann_cond(make_bipartite(state, dim_a, dim_b));
    });

    // Source construction.
    m.def("build_cq_state", [](const std::vector<double>& p, const std::vector<Matrix>& outputs) {
        return build_cq_state(ProbabilityVector(p), make_channel(outputs)).state.matrix();
    });
    m.def("dual_pa_state",
          [](const std::vector<double>& p, const std::vector<Matrix>& outputs) {
              const PurifiedSource psi =
                  purify_source(ProbabilityVector(p), make_channel(outputs));
              const BipartiteState dual =
                  measure_conjugate(psi, {Subsystem::APrime, Subsystem::C});
              return py::make_tuple(dual.state.matrix(), dual.dimA, dual.dimB);
          },
          "CQ state of the conjugate observable against the dual side information");

    // Exponents.
    m.def("gallager_e0", [](double s, const std::vector<double>& p,
                            const std::vector<Matrix>& outputs) {
        return gallager_e0(s, ProbabilityVector(p), make_channel(outputs));
    });
    m.def("e0_entropy_identity", [](double s, const std::vector<Matrix>& outputs) {
        const E0Identity id = e0_entropy_identity(s, make_channel(outputs));
        py::dict out;
        out["lhs"] = id.lhs;
        out["rhs"] = id.rhs;
        out["gap"] = id.gap;
        return out;
    });
    m.def("holevo_condition", [](const std::vector<double>& p, double s,
                                 const std::vector<Matrix>& outputs) {
        const HolevoCheck check =
            holevo_condition(ProbabilityVector(p), s, make_channel(outputs));
        py::dict out;
        out["residuals"] = check.residuals;
        out["satisfied"] = check.satisfied;
        return out;
    });
    m.def("e0_opt", [](double s, const std::vector<Matrix>& outputs) {
        const E0Opt opt = e0_opt(s, make_channel(outputs));
        py::dict out;
        out["value"] = opt.value;
        out["optimizer"] = opt.optimizer;
        out["residuals"] = opt.residuals;
        return out;
    });
    m.def("dc_exponent_lower", [](const Matrix& state, int dim_a, int dim_b, double rate) {
        return curve_point_dict(dc_exponent_lower(make_bipartite(state, dim_a, dim_b), rate));
    });
    m.def("dc_sphere_packing", [](const Matrix& state, int dim_a, int dim_b, double rate) {
        return curve_point_dict(dc_sphere_packing(make_bipartite(state, dim_a, dim_b), rate));
    });
    m.def("pa_exponent_lower", [](const Matrix& state, int dim_a, int dim_b, double rate) {
        return curve_point_dict(pa_exponent_lower(make_bipartite(state, dim_a, dim_b), rate));
    });
    m.def("pa_sphere_packing",
          [](const Matrix& state, int dim_a, int dim_b, double rate, double alpha_max) {
              return curve_point_dict(
                  pa_sphere_packing(make_bipartite(state, dim_a, dim_b), rate, alpha_max));
          },
          py::arg("state"), py::arg("dim_a"), py::arg("dim_b"), py::arg("rate"),
          py::arg("alpha_max") = 64.0);
    m.def("cc_exponent_lower",
          [](const std::vector<Matrix>& outputs, const std::vector<Matrix>& unitaries,
             double rate) {
              const SymmetricChannel sym{make_channel(outputs), GroupAction{unitaries}};
              return curve_point_dict(cc_exponent_lower(sym, rate));
          });
    m.def("cc_sphere_packing", [](const std::vector<Matrix>& outputs, double rate,
                                  double s_max) {
        return curve_point_dict(cc_sphere_packing(make_channel(outputs), rate, s_max));
    }, py::arg("outputs"), py::arg("rate"), py::arg("s_max") = 64.0);

    // Discrimination.
    m.def("helstrom", [](double p0, const Matrix& rho0, double p1, const Matrix& rho1) {
        return helstrom(p0, rho0, p1, rho1);
    });
    m.def("pguess", [](const std::vector<double>& priors, const std::vector<Matrix>& states,
                       double tol) {
        const PguessResult r = pguess(Ensemble(ProbabilityVector(priors), states), tol);
        return certified_dict(r.value);
    }, py::arg("priors"), py::arg("states"), py::arg("tol") = 1e-8);
    m.def("max_fidelity_uniform",
          [](std::int64_t k, const std::vector<double>& weights,
             const std::vector<Matrix>& states, double tol) {
              return certified_dict(max_fidelity_uniform(k, weights, states, tol).value);
          },
          py::arg("k"), py::arg("weights"), py::arg("states"), py::arg("tol") = 1e-8);

    // Finite-n experiments.
    m.def("dc_error_exact",
          [](const std::vector<double>& p, const std::vector<Matrix>& outputs, int n,
             std::int64_t d, const std::vector<std::vector<std::int64_t>>& check_rows) {
              const FieldMatrix h = check_rows.empty()
                                        ? FieldMatrix(d, 0, n)
                                        : make_field_matrix(d, check_rows);
              const ExperimentReport r = dc_error_exact(make_source(p, outputs), n, h);
              py::dict out;
              out["p_err"] = r.measured;
              out["p_err_pgm"] = r.measured_alt;
              out["rate"] = r.rate;
              out["cert_gap"] = r.cert_gap;
              return out;
          });
    m.def("pa_distance_exact",
          [](const std::vector<double>& p, const std::vector<Matrix>& outputs, int n,
             std::int64_t d, const std::vector<std::vector<std::int64_t>>& extractor_rows) {
              const FieldMatrix g = extractor_rows.empty()
                                        ? FieldMatrix(d, 0, n)
                                        : make_field_matrix(d, extractor_rows);
              const ExperimentReport r = pa_distance_exact(make_source(p, outputs), n, g);
              py::dict out;
              out["distance"] = r.measured;
              out["fidelity_sq"] = r.measured_alt;
              out["rate"] = r.rate;
              return out;
          });
    m.def("duality_check",
          [](const std::vector<double>& p, const std::vector<Matrix>& outputs, int n,
             std::int64_t d, const std::vector<std::vector<std::int64_t>>& check_rows,
             double tol) {
              const FieldMatrix h = check_rows.empty()
                                        ? FieldMatrix(d, 0, n)
                                        : make_field_matrix(d, check_rows);
              const DualityReport r = duality_check(make_source(p, outputs), n, h, tol);
              py::dict out;
              out["pguess"] = certified_dict(r.pguess_side);
              out["max_fidelity"] = certified_dict(r.fidelity_side);
              out["gap"] = r.gap;
              return out;
          },
          py::arg("p"), py::arg("outputs"), py::arg("n"), py::arg("d"),
          py::arg("check_rows"), py::arg("tol") = 1e-8);

    // Spec files.
    m.def("parse_channel_spec", [](const std::string& text) {
        const ChannelSpec spec = parse_channel_spec(text);
        py::dict out;
        out["d"] = spec.d;
        out["outputs"] = spec.outputs;
        if (spec.input_distribution) out["input_distribution"] = *spec.input_distribution;
        if (spec.symmetry) out["symmetry"] = *spec.symmetry;
        return out;
    });
}
