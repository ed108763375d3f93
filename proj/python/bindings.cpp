// Python module: thin JSON-shaped wrappers over the core library. Payloads
// are plain dicts and lists in the same shapes the CLI reads and writes.

#include <pybind11/pybind11.h>

#include <string>

#include "effalg/commutative.hpp"
#include "effalg/effect_algebra.hpp"
#include "effalg/errors.hpp"
#include "effalg/fixtures.hpp"
#include "effalg/jc_state_ops.hpp"
#include "effalg/json_io.hpp"
#include "effalg/mv_algebra.hpp"
#include "effalg/state_ops.hpp"
#include "effalg/suite.hpp"

namespace py = pybind11;
using namespace effalg;

namespace {

Json to_json(py::handle h) {
    if (h.is_none()) return nullptr;
    if (py::isinstance<py::bool_>(h)) return h.cast<bool>();
    if (py::isinstance<py::int_>(h)) return h.cast<long long>();
    if (py::isinstance<py::float_>(h)) return h.cast<double>();
    if (py::isinstance<py::str>(h)) return h.cast<std::string>();
    if (py::isinstance<py::dict>(h)) {
        Json o = Json::object();
        for (auto item : h.cast<py::dict>())
            o[py::str(item.first).cast<std::string>()] = to_json(item.second);
        return o;
    }
    if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
        Json a = Json::array();
        for (auto item : h.cast<py::sequence>()) a.push_back(to_json(item));
        return a;
    }
    throw py::type_error("unsupported value in payload");
}

py::object to_py(const Json& j) {
    switch (j.type()) {
        case Json::value_t::null:
            return py::none();
        case Json::value_t::boolean:
            return py::bool_(j.get<bool>());
        case Json::value_t::number_integer:
            return py::int_(j.get<long long>());
        case Json::value_t::number_unsigned:
            return py::int_(j.get<unsigned long long>());
        case Json::value_t::number_float:
            return py::float_(j.get<double>());
        case Json::value_t::string:
            return py::str(j.get<std::string>());
        case Json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(to_py(v));
            return out;
        }
        case Json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it)
                out[py::str(it.key())] = to_py(it.value());
            return std::move(out);
        }
        default:
            return py::none();
    }
}

Json validate_json(const Json& j) {
    Json out;
    ValidationReport rep;
    if (j.contains("sum")) {
        rep = validate_effect_algebra(algebra_from_json(j));
        out["kind"] = "effect-algebra";
    } else if (j.contains("boxplus")) {
        rep = validate_mv(mv_from_json(j));
        out["kind"] = "mv-algebra";
    } else if (j.contains("T")) {
        rep = validate_stochastic_idempotent(stochastic_from_json(j));
        out["kind"] = "stochastic-idempotent";
    } else {
        throw StructuralError("expected an algebra table or a stochastic matrix");
    }
    Json body = report_to_json(rep);
    body["kind"] = out["kind"];
    return body;
}

FiniteEffectAlgebra algebra_any(const Json& j) {
    if (j.contains("boxplus")) return mv_to_effect_algebra(mv_from_json(j));
    return algebra_from_json(j);
}

Json classify_json(const Json& j) {
    FiniteEffectAlgebra e = algebra_any(j);
    ValidationReport rep = validate_effect_algebra(e);
    Json out;
    out["valid"] = rep.valid;
    if (!rep.valid) {
        out["violations"] = report_to_json(rep)["violations"];
        return out;
    }
    AlgebraClass c = classify(e);
    out["lattice"] = c.is_lattice;
    out["orthomodular"] = c.is_orthomodular;
    out["mv_effect_algebra"] = c.is_mv_effect_algebra;
    StatePolytope poly = state_space(e);
    Json sp;
    sp["dim"] = poly.dim;
    sp["vertices"] = Json::array();
    for (const auto& v : poly.vertices) {
        Json jv = Json::array();
        for (const Rat& x : v.values) jv.push_back(rat_to_json(x));
        sp["vertices"].push_back(std::move(jv));
    }
    out["state_space"] = std::move(sp);
    return out;
}

Json enumerate_json(const Json& j, int bound) {
    FiniteEffectAlgebra e = algebra_any(j);
    Json arr = Json::array();
    for (const auto& op : enumerate_state_operators(e, bound)) {
        auto rep = validate_state_operator(e, op);
        Json jo;
        jo["tau"] = op.tau;
        jo["strong"] = rep.is_strong.value_or(false);
        jo["faithful"] = rep.is_faithful.value_or(false);
        arr.push_back(std::move(jo));
    }
    return arr;
}

Json check_tau_json(const Json& aj, const Json& tj) {
    FiniteEffectAlgebra e = algebra_any(aj);
    auto rep = validate_state_operator(e, tau_from_json(tj));
    Json out;
    out["state_operator"] = rep.is_state_operator;
    out["violations"] = report_to_json({rep.is_state_operator, rep.violations})["violations"];
    if (rep.is_state_operator) {
        out["strong"] = rep.is_strong.value_or(false);
        out["faithful"] = rep.is_faithful.value_or(false);
        out["kernel"] = rep.kernel;
    }
    return out;
}

Json quotient_json(const Json& aj, const Json& tj) {
    FiniteEffectAlgebra e = algebra_any(aj);
    auto q = quotient_state_operator(e, tau_from_json(tj));
    Json out;
    out["algebra"] = algebra_to_json(q.quotient.algebra);
    out["class_of"] = q.quotient.class_of;
    out["representatives"] = q.quotient.representative;
    out["tau"] = q.tau.tau;
    return out;
}

Json decompose_json(const Json& mj) {
    HermitianMap m = map_from_json(mj);
    auto dec = decompose_state_operator(m);
    Json out;
    out["support"] = matrix_to_json(dec.support);
    out["mu"] = map_to_json(dec.mu);
    out["phi"] = map_to_json(dec.phi);
    out["domain_dimension"] = dec.multiplicative_domain.size();
    out["recomposition_residual"] =
        opnorm_real(dec.phi.compose(dec.mu).action - m.action);
    return out;
}

Json strong_json(const Json& tj) {
    auto res = is_strong_commutative(stochastic_from_json(tj));
    Json out;
    out["strong"] = res.strong;
    if (res.witness) {
        out["witness"] = {{"f", values_to_json(res.witness->first)},
                          {"g", values_to_json(res.witness->second)},
                          {"min", values_to_json(res.min_image)},
                          {"mapped", values_to_json(res.mapped)}};
    }
    return out;
}

Json ce_json(const Json& j) {
    Json out;
    if (j.contains("T")) {
        auto res = is_ce_commutative(stochastic_from_json(j));
        out["conditional_expectation"] = res.ce;
        if (res.witness)
            out["witness"] = {{"f", values_to_json(res.witness->first)},
                              {"g", values_to_json(res.witness->second)}};
    } else {
        auto res = is_conditional_expectation(map_from_json(j));
        out["conditional_expectation"] = res.is_ce;
        out["basis_residual"] = res.basis_residual;
        out["sampled_residual"] = res.sampled_residual;
    }
    return out;
}

Json mvce_json(const Json& j) {
    FiniteProbSpace sp = prob_from_json(j);
    BlockPartition blocks = blocks_from_json(j);
    RatVec a = values_from_json(j);
    RatVec e = mv_conditional_expectation(sp, blocks, a);
    Json out;
    out["expectation"] = values_to_json(e);
    out["identity"] = verify_conditional_identity(sp, blocks, a, e);
    return out;
}

Json fixture_json(const std::string& name) {
    if (name == "chain2") return algebra_to_json(fixtures::chain2());
    if (name == "chain3") return algebra_to_json(fixtures::chain3());
    if (name == "diamond") return algebra_to_json(fixtures::diamond());
    if (name == "mo2") return algebra_to_json(fixtures::mo2());
    if (name == "luk3") return mv_to_json(fixtures::luk3());
    if (name == "luk3_squared") return mv_to_json(fixtures::luk3_squared());
    if (name == "luk3_ea") return algebra_to_json(fixtures::luk3_ea());
    if (name == "luk3_squared_ea") return algebra_to_json(fixtures::luk3_squared_ea());
    if (name == "first_coordinate")
        return tau_to_json(ElementMap{fixtures::luk3_squared_first_coordinate()});
    if (name == "collapse2") return stochastic_to_json(fixtures::collapse2());
    if (name == "straddle3") return stochastic_to_json(fixtures::straddle3());
    if (name == "pinching2") return pvm_to_json(fixtures::pinching2());
    if (name == "pinching3") return pvm_to_json(fixtures::pinching3());
    if (name == "uniform4" || name == "halfnull4") {
        auto f = name == "uniform4" ? fixtures::uniform4() : fixtures::halfnull4();
        Json out;
        out["P"] = values_to_json(f.space.p);
        out["blocks"] = f.blocks.blocks;
        return out;
    }
    throw PreconditionError("unknown fixture: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite effect algebras, state operators, and conditional expectations";

    m.def("validate", [](py::object o) { return to_py(validate_json(to_json(o))); },
          py::arg("table"),
          "Validate an effect algebra, MV-algebra, or stochastic idempotent.");
    m.def("classify", [](py::object o) { return to_py(classify_json(to_json(o))); },
          py::arg("table"),
          "Lattice / orthomodular / MV flags plus the exact state polytope.");
    m.def("enumerate_state_operators",
          [](py::object o, int bound) { return to_py(enumerate_json(to_json(o), bound)); },
          py::arg("table"), py::arg("bound") = 9,
          "All state operators with strong/faithful flags.");
    m.def("check_state_operator",
          [](py::object a, py::object t) {
              return to_py(check_tau_json(to_json(a), to_json(t)));
          },
          py::arg("table"), py::arg("tau"));
    m.def("quotient",
          [](py::object a, py::object t) {
              return to_py(quotient_json(to_json(a), to_json(t)));
          },
          py::arg("table"), py::arg("tau"),
          "Quotient by the kernel ideal with the induced faithful operator.");
    m.def("state_space",
          [](py::object o) { return to_py(classify_json(to_json(o))["state_space"]); },
          py::arg("table"));

    m.def("pinching",
          [](py::object pvm) {
              return to_py(map_to_json(pinching_map(pvm_from_json(to_json(pvm)))));
          },
          py::arg("pvm"), "Blockwise averaging map of a projection-valued measure.");
    m.def("apply_map",
          [](py::object mj, py::object aj) {
              HermitianMap m_ = map_from_json(to_json(mj));
              return to_py(matrix_to_json(m_.apply(matrix_from_json(to_json(aj)))));
          },
          py::arg("map"), py::arg("matrix"));
    m.def("square_gaps",
          [](py::object mj, py::object aj) {
              auto g = square_inequality_gaps(map_from_json(to_json(mj)),
                                              matrix_from_json(to_json(aj)));
              Json out;
              out["lhs_gap"] = g.lhs_gap;
              out["rhs_gap"] = g.rhs_gap;
              return to_py(out);
          },
          py::arg("map"), py::arg("matrix"),
          "Two-sided square inequality gaps at a Hermitian input.");
    m.def("check_map",
          [](py::object mj) {
              auto rep = check_state_operator(map_from_json(to_json(mj)));
              Json out;
              out["unital"] = rep.unital;
              out["positive"] = rep.positive;
              out["idempotent"] = rep.idempotent;
              out["ok"] = rep.ok;
              return to_py(out);
          },
          py::arg("map"), "Positive unital idempotent check.");
    m.def("support",
          [](py::object mj) {
              CMat e = support_projection(map_from_json(to_json(mj)));
              return to_py(matrix_to_json(e));
          },
          py::arg("map"));
    m.def("decompose",
          [](py::object mj) { return to_py(decompose_json(to_json(mj))); },
          py::arg("map"),
          "Factor through a faithful conditional expectation onto the "
          "multiplicative domain.");

    m.def("is_strong", [](py::object t) { return to_py(strong_json(to_json(t))); },
          py::arg("T"), "Range closed under pointwise minima.");
    m.def("is_ce", [](py::object t) { return to_py(ce_json(to_json(t))); },
          py::arg("payload"),
          "Range closed under products (stochastic) or symmetrized triples (map).");
    m.def("mvce", [](py::object p) { return to_py(mvce_json(to_json(p))); },
          py::arg("prob"),
          "Blockwise conditional average with the exact integral identity.");

    m.def("run_suite",
          [](std::uint64_t seed, int samples, int mutations, int composites,
             double eps_eq, double eps_psd) {
              SuiteConfig cfg;
              cfg.seed = seed;
              cfg.samples = samples;
              cfg.mutations = mutations;
              cfg.composites = composites;
              cfg.tol = Tolerances{eps_eq, eps_psd};
              return to_py(suite_to_json(run_suite(cfg)));
          },
          py::arg("seed") = 42, py::arg("samples") = 1000, py::arg("mutations") = 100,
          py::arg("composites") = 100, py::arg("eps_eq") = 1e-9,
          py::arg("eps_psd") = 1e-9, "Run every bundled theorem check.");

    m.def("fixture", [](const std::string& n) { return to_py(fixture_json(n)); },
          py::arg("name"));
    m.def("fixture_names", []() {
        py::list out;
        for (const char* n :
             {"chain2", "chain3", "diamond", "mo2", "luk3", "luk3_squared", "luk3_ea",
              "luk3_squared_ea", "first_coordinate", "collapse2", "straddle3",
              "pinching2", "pinching3", "uniform4", "halfnull4"})
            out.append(py::str(n));
        return out;
    });
}
