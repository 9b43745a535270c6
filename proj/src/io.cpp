#include "qwalk/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qwalk/errors.hpp"

namespace qwalk::io {

std::string format_double(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("refusing to serialize a non-finite number");
    if (x == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void dump_string(std::ostringstream& os, const std::string& s) {
    os << Json(s).dump();
}

void dump_rec(std::ostringstream& os, const Json& j, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                return;
            }
            os << "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ",\n";
                first = false;
                os << pad;
                dump_string(os, it.key());
                os << ": ";
                dump_rec(os, it.value(), depth + 1);
            }
            os << "\n" << close_pad << "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                return;
            }
            bool scalar = true;
            for (const auto& e : j)
                if (e.is_structured()) scalar = false;
            if (scalar) {
                os << "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) os << ", ";
                    dump_rec(os, j[i], depth + 1);
                }
                os << "]";
                return;
            }
            os << "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ",\n";
                os << pad;
                dump_rec(os, j[i], depth + 1);
            }
            os << "\n" << close_pad << "]";
            return;
        }
        case Json::value_t::number_float:
            os << format_double(j.get<double>());
            return;
        case Json::value_t::string:
            dump_string(os, j.get<std::string>());
            return;
        default:
            os << j.dump();
            return;
    }
}

}  // namespace

std::string dump(const Json& j) {
    std::ostringstream os;
    dump_rec(os, j, 0);
    os << "\n";
    return os.str();
}

Json matrix_to_json(const Mat& m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            re.push_back(m(i, k).real());
            im.push_back(m(i, k).imag());
        }
    Json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j;
}

Mat matrix_from_json(const Json& j) {
    try {
        const auto rows = j.at("rows").get<Eigen::Index>();
        const auto cols = j.at("cols").get<Eigen::Index>();
        const auto& re = j.at("re");
        if (rows < 0 || cols < 0 || static_cast<Eigen::Index>(re.size()) != rows * cols)
            throw InvalidArgument("matrix JSON: 're' length does not match rows*cols");
        const bool has_im = j.contains("im");
        if (has_im && static_cast<Eigen::Index>(j.at("im").size()) != rows * cols)
            throw InvalidArgument("matrix JSON: 'im' length does not match rows*cols");
        Mat m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index k = 0; k < cols; ++k) {
                const auto idx = static_cast<std::size_t>(i * cols + k);
                m(i, k) = cplx(re[idx].get<double>(), has_im ? j.at("im")[idx].get<double>() : 0.0);
            }
        return m;
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("malformed matrix JSON: ") + e.what());
    }
}

Json graph_to_json(const ColoredGraph& g) {
    Json j;
    j["num_vertices"] = g.num_vertices();
    j["vertex_labels"] = g.labels();
    Json arcs = Json::array();
    for (const Arc& a : g.arcs()) arcs.push_back(Json::array({a.v, a.c, a.w, a.c2}));
    j["arcs"] = std::move(arcs);
    return j;
}

ColoredGraph graph_from_json(const Json& j) {
    try {
        const int nv = j.at("num_vertices").get<int>();
        std::vector<std::string> labels;
        if (j.contains("vertex_labels")) labels = j.at("vertex_labels").get<std::vector<std::string>>();
        std::vector<Arc> arcs;
        for (const auto& a : j.at("arcs")) {
            if (!a.is_array() || a.size() != 4) throw InvalidArgument("graph JSON: each arc must be [v, c, w, c']");
            arcs.push_back({a[0].get<int>(), a[1].get<int>(), a[2].get<int>(), a[3].get<int>()});
        }
        return ColoredGraph(nv, std::move(arcs), std::move(labels));
    } catch (const Json::exception& e) {
        throw InvalidArgument(std::string("malformed graph JSON: ") + e.what());
    }
}

Json orbits_to_json(const OrbitBasis& orbits, const ColoredGraph& g) {
    Json list = Json::array();
    for (int k = 0; k < orbits.count(); ++k) {
        Json members = Json::array();
        for (int x : orbits.orbit(k)) {
            BasisIndex b = g.basis(x);
            Json m;
            m["vertex"] = b.vertex;
            m["label"] = g.label(b.vertex);
            m["color"] = b.color;
            members.push_back(std::move(m));
        }
        Json o;
        o["index"] = k;
        o["size"] = orbits.orbit(k).size();
        o["members"] = std::move(members);
        list.push_back(std::move(o));
    }
    Json j;
    j["dim"] = orbits.dim;
    j["count"] = orbits.count();
    j["orbits"] = std::move(list);
    return j;
}

Json quotient_to_json(const QuotientGraph& q) {
    Json j = graph_to_json(q.graph);
    j["vertex_sets"] = q.vertex_sets;
    j["quotient_vertex_of_orbit"] = q.quotient_vertex_of_orbit;
    return j;
}

Json report_to_json(const HittingReport& r) {
    Json j;
    if (r.tau)
        j["tau"] = *r.tau;
    else
        j["tau"] = r.status == TauStatus::Infinite ? "infinite" : "indeterminate";
    j["status"] = tau_status_name(r.status);
    j["method"] = r.method;
    j["p_prefix"] = r.p_prefix;
    j["hit_probability"] = r.hit_probability;
    j["hit_probability_closed"] = r.hit_probability_closed ? Json(*r.hit_probability_closed) : Json(nullptr);
    j["tau_series"] = r.tau_series ? Json(*r.tau_series) : Json(nullptr);
    j["series_steps"] = r.series_steps;
    j["series_converged"] = r.series_converged;
    j["cross_check_ok"] = r.cross_check_ok;
    j["P_rank"] = r.P_rank;
    j["P_rank_structural"] = r.P_rank_structural;
    j["P_rank_accidental"] = r.P_rank_accidental;
    j["overlap_with_P"] = r.overlap;
    j["hit_probability_bound"] = r.hit_probability_bound;
    j["hit_probability_bound_squared"] = r.hit_probability_bound_squared;
    j["sigma_min_I_minus_N"] = r.sigma_min;
    j["min_eigen_gap_I_minus_N"] = r.min_gap;
    j["intersection_dim"] = r.intersection_dim ? Json(*r.intersection_dim) : Json(nullptr);
    j["intersection_dim_quotient"] = r.intersection_dim_quotient ? Json(*r.intersection_dim_quotient) : Json(nullptr);
    Json spectra = Json::object();
    for (const auto& [label, eig] : r.c_matrix_spectra) spectra[label] = eig;
    j["c_matrix_spectra"] = std::move(spectra);
    j["notes"] = r.notes;
    return j;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw InvalidArgument("malformed JSON in " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
    if (!out) throw InvalidArgument("failed writing " + path);
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

}  // namespace qwalk::io
