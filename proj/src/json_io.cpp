#include "effalg/json_io.hpp"

#include <fstream>

#include "effalg/errors.hpp"

namespace effalg {

Rat json_to_rat(const Json& j) {
    if (j.is_number_integer()) return Rat((long)j.get<int64_t>());
    if (j.is_number_float()) return rat_from_double(j.get<double>());
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    if (j.is_object() && j.contains("num") && j.contains("den")) {
        Rat num = json_to_rat(j.at("num"));
        Rat den = json_to_rat(j.at("den"));
        if (den == 0) throw StructuralError("rational with zero denominator");
        Rat r = num / den;
        r.canonicalize();
        return r;
    }
    throw StructuralError("expected a number, \"p/q\" string, or {num, den} object");
}

Json rat_to_json(const Rat& r) {
    if (r.get_den() == 1 && r.get_num().fits_slong_p())
        return Json(r.get_num().get_si());
    Json out = Json::object();
    out["num"] = r.get_num().get_str();
    out["den"] = r.get_den().get_str();
    return out;
}

namespace {

int table_entry(const Json& j) {
    if (j.is_null()) return kUndef;
    if (j.is_number_integer()) return j.get<int>();
    throw StructuralError("table entries must be integers or null");
}

int int_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number_integer())
        throw StructuralError(std::string("missing integer field \"") + key + "\"");
    return j.at(key).get<int>();
}

const Json& array_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw StructuralError(std::string("missing array field \"") + key + "\"");
    return j.at(key);
}

} // namespace

FiniteEffectAlgebra algebra_from_json(const Json& j) {
    FiniteEffectAlgebra e;
    e.n = int_field(j, "n");
    e.zero = int_field(j, "zero");
    e.one = int_field(j, "one");
    for (const Json& row : array_field(j, "sum")) {
        if (!row.is_array()) throw StructuralError("sum rows must be arrays");
        std::vector<int> r;
        for (const Json& cell : row) r.push_back(table_entry(cell));
        e.sum.push_back(std::move(r));
    }
    check_structure(e);
    return e;
}

Json algebra_to_json(const FiniteEffectAlgebra& e) {
    Json j = Json::object();
    j["n"] = e.n;
    j["zero"] = e.zero;
    j["one"] = e.one;
    Json sum = Json::array();
    for (const auto& row : e.sum) {
        Json r = Json::array();
        for (int v : row) r.push_back(v == kUndef ? Json(nullptr) : Json(v));
        sum.push_back(std::move(r));
    }
    j["sum"] = std::move(sum);
    return j;
}

MvAlgebra mv_from_json(const Json& j) {
    MvAlgebra m;
    m.n = int_field(j, "n");
    m.zero = int_field(j, "zero");
    for (const Json& row : array_field(j, "boxplus")) {
        if (!row.is_array()) throw StructuralError("boxplus rows must be arrays");
        std::vector<int> r;
        for (const Json& cell : row) {
            if (!cell.is_number_integer())
                throw StructuralError("boxplus entries must be integers");
            r.push_back(cell.get<int>());
        }
        m.boxplus.push_back(std::move(r));
    }
    for (const Json& cell : array_field(j, "neg")) {
        if (!cell.is_number_integer()) throw StructuralError("neg entries must be integers");
        m.neg.push_back(cell.get<int>());
    }
    check_structure(m);
    return m;
}

Json mv_to_json(const MvAlgebra& m) {
    Json j = Json::object();
    j["n"] = m.n;
    j["zero"] = m.zero;
    j["boxplus"] = m.boxplus;
    j["neg"] = m.neg;
    return j;
}

Json report_to_json(const ValidationReport& rep) {
    Json j = Json::object();
    j["valid"] = rep.valid;
    Json v = Json::array();
    for (const auto& viol : rep.violations) {
        Json item = Json::object();
        item["axiom"] = viol.axiom;
        item["witness"] = viol.witness;
        if (!viol.detail.empty()) item["detail"] = viol.detail;
        v.push_back(std::move(item));
    }
    j["violations"] = std::move(v);
    return j;
}

ElementMap tau_from_json(const Json& j) {
    ElementMap m;
    for (const Json& cell : array_field(j, "tau")) {
        if (!cell.is_number_integer()) throw StructuralError("tau entries must be integers");
        m.tau.push_back(cell.get<int>());
    }
    return m;
}

Json tau_to_json(const ElementMap& m) {
    Json j = Json::object();
    j["tau"] = m.tau;
    return j;
}

CMat matrix_from_json(const Json& j) {
    int d = int_field(j, "dim");
    if (d < 1) throw StructuralError("matrix dimension must be positive");
    const Json& re = array_field(j, "re");
    CMat a = CMat::Zero(d, d);
    auto fill = [&](const Json& part, bool imag) {
        if ((int)part.size() != d) throw StructuralError("matrix part has wrong row count");
        for (int i = 0; i < d; ++i) {
            const Json& row = part.at(i);
            if (!row.is_array() || (int)row.size() != d)
                throw StructuralError("matrix part has wrong row length");
            for (int k = 0; k < d; ++k) {
                double v = to_double(json_to_rat(row.at(k)));
                a(i, k) += imag ? std::complex<double>(0, v) : std::complex<double>(v, 0);
            }
        }
    };
    fill(re, false);
    if (j.contains("im")) fill(array_field(j, "im"), true);
    return a;
}

Json matrix_to_json(const CMat& a) {
    Json j = Json::object();
    const int d = (int)a.rows();
    j["dim"] = d;
    Json re = Json::array(), im = Json::array();
    for (int i = 0; i < d; ++i) {
        Json rr = Json::array(), ri = Json::array();
        for (int k = 0; k < d; ++k) {
            rr.push_back(a(i, k).real());
            ri.push_back(a(i, k).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

HermitianMap map_from_json(const Json& j) {
    int d = int_field(j, "dim");
    if (d < 1) throw StructuralError("map dimension must be positive");
    const Json& rows = array_field(j, "matrix");
    const int dim = d * d;
    if ((int)rows.size() != dim) throw StructuralError("map matrix must be d^2 x d^2");
    HermitianMap m;
    m.d = d;
    m.action = RMat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const Json& row = rows.at(i);
        if (!row.is_array() || (int)row.size() != dim)
            throw StructuralError("map matrix row has wrong length");
        for (int k = 0; k < dim; ++k) m.action(i, k) = to_double(json_to_rat(row.at(k)));
    }
    return m;
}

Json map_to_json(const HermitianMap& m) {
    Json j = Json::object();
    j["dim"] = m.d;
    Json rows = Json::array();
    for (int i = 0; i < m.action.rows(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < m.action.cols(); ++k) row.push_back(m.action(i, k));
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    return j;
}

std::vector<CMat> pvm_from_json(const Json& j) {
    const Json* arr = &j;
    if (j.is_object() && j.contains("projections")) arr = &j.at("projections");
    if (!arr->is_array()) throw StructuralError("PVM must be an array of matrices");
    std::vector<CMat> pvm;
    for (const Json& item : *arr) pvm.push_back(matrix_from_json(item));
    return pvm;
}

Json pvm_to_json(const std::vector<CMat>& pvm) {
    Json arr = Json::array();
    for (const CMat& p : pvm) arr.push_back(matrix_to_json(p));
    return arr;
}

StochasticMatrix stochastic_from_json(const Json& j) {
    const Json& rows = array_field(j, "T");
    StochasticMatrix t;
    for (const Json& row : rows) {
        if (!row.is_array()) throw StructuralError("T rows must be arrays");
        RatVec r;
        for (const Json& cell : row) r.push_back(json_to_rat(cell));
        t.t.push_back(std::move(r));
    }
    check_structure(t);
    return t;
}

Json stochastic_to_json(const StochasticMatrix& t) {
    Json rows = Json::array();
    for (const auto& row : t.t) {
        Json r = Json::array();
        for (const Rat& v : row) r.push_back(rat_to_json(v));
        rows.push_back(std::move(r));
    }
    Json j = Json::object();
    j["T"] = std::move(rows);
    return j;
}

FiniteProbSpace prob_from_json(const Json& j) {
    FiniteProbSpace sp;
    for (const Json& cell : array_field(j, "P")) sp.p.push_back(json_to_rat(cell));
    check_structure(sp);
    return sp;
}

BlockPartition blocks_from_json(const Json& j) {
    BlockPartition b;
    for (const Json& row : array_field(j, "blocks")) {
        if (!row.is_array()) throw StructuralError("blocks must be arrays");
        std::vector<int> block;
        for (const Json& cell : row) {
            if (!cell.is_number_integer())
                throw StructuralError("block entries must be integers");
            block.push_back(cell.get<int>());
        }
        b.blocks.push_back(std::move(block));
    }
    return b;
}

RatVec values_from_json(const Json& j) {
    const Json* arr = &j;
    if (j.is_object() && j.contains("values")) arr = &j.at("values");
    if (!arr->is_array()) throw StructuralError("expected an array of values");
    RatVec v;
    for (const Json& cell : *arr) v.push_back(json_to_rat(cell));
    return v;
}

Json values_to_json(const RatVec& v) {
    Json arr = Json::array();
    for (const Rat& r : v) arr.push_back(rat_to_json(r));
    return arr;
}

StateVector state_from_json(const Json& j) { return {values_from_json(j)}; }

Json state_to_json(const StateVector& s) { return values_to_json(s.values); }

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& ex) {
        throw StructuralError("cannot parse JSON in " + path + ": " + ex.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw StructuralError("cannot open file for writing: " + path);
    out << j.dump(2) << "\n";
}

}  // namespace effalg
