#include "phaseborn/cli.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <openssl/evp.h>

namespace phaseborn::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string &path, const std::string &message) {
    throw SpecError((path.empty() ? std::string("/") : path) + ": " + message);
}

std::string child(const std::string &path, const std::string &key) { return path + "/" + key; }
std::string child(const std::string &path, std::size_t index) {
    return path + "/" + std::to_string(index);
}

void require_object(const json &j, const std::string &path,
                    std::initializer_list<const char *> allowed) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    for (const auto &item : j.items()) {
        bool known = false;
        for (const char *key : allowed) {
            known = known || item.key() == key;
        }
        if (!known) {
            fail(child(path, item.key()), "unknown field");
        }
    }
}

const json &member(const json &obj, const std::string &path, const char *key) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(child(path, key), "missing required field");
    }
    return *it;
}

const json *optional_member(const json &obj, const char *key) {
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

double get_number(const json &j, const std::string &path) {
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        fail(path, "expected a finite number");
    }
    return v;
}

std::uint64_t get_uint(const json &j, const std::string &path) {
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>();
    }
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    fail(path, "expected a nonnegative integer");
}

Complex get_complex(const json &j, const std::string &path) {
    if (j.is_number()) {
        return {get_number(j, path), 0.0};
    }
    if (!j.is_array() || j.size() != 2) {
        fail(path, "expected a complex number as [re, im] or a real number");
    }
    return {get_number(j[0], child(path, 0)), get_number(j[1], child(path, 1))};
}

CVector get_cvector(const json &j, const std::string &path, int dim) {
    if (!j.is_array()) {
        fail(path, "expected an array of complex numbers");
    }
    if (static_cast<int>(j.size()) != dim) {
        fail(path, "dimension mismatch: expected " + std::to_string(dim) + " components, got " +
                       std::to_string(j.size()));
    }
    CVector v(dim);
    for (int n = 0; n < dim; ++n) {
        v(n) = get_complex(j[static_cast<std::size_t>(n)], child(path, static_cast<std::size_t>(n)));
    }
    return v;
}

Eigen::VectorXd get_rvector(const json &j, const std::string &path, int dim) {
    if (!j.is_array()) {
        fail(path, "expected an array of numbers");
    }
    if (static_cast<int>(j.size()) != dim) {
        fail(path, "dimension mismatch: expected " + std::to_string(dim) + " components, got " +
                       std::to_string(j.size()));
    }
    Eigen::VectorXd v(dim);
    for (int n = 0; n < dim; ++n) {
        v(n) = get_number(j[static_cast<std::size_t>(n)], child(path, static_cast<std::size_t>(n)));
    }
    return v;
}

StateVector get_state_vector(const json &j, const std::string &path, int dim) {
    CVector v = get_cvector(j, path, dim);
    try {
        return StateVector(std::move(v));
    } catch (const InvariantError &e) {
        fail(path, e.what());
    }
}

CMatrix get_cmatrix(const json &j, const std::string &path, int dim) {
    if (!j.is_array()) {
        fail(path, "expected a row-major array of rows");
    }
    if (static_cast<int>(j.size()) != dim) {
        fail(path, "dimension mismatch: expected " + std::to_string(dim) + " rows, got " +
                       std::to_string(j.size()));
    }
    CMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const auto rpath = child(path, static_cast<std::size_t>(r));
        m.row(r) = get_cvector(j[static_cast<std::size_t>(r)], rpath, dim).transpose();
    }
    return m;
}

ClassicalState parse_state(const json &j, const std::string &path, int dim) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    const json &type_node = member(j, path, "type");
    if (!type_node.is_string()) {
        fail(child(path, "type"), "expected a string");
    }
    const std::string type = type_node.get<std::string>();
    if (type == "point_mass") {
        require_object(j, path, {"type", "phi"});
        return PointMass{get_state_vector(member(j, path, "phi"), child(path, "phi"), dim)};
    }
    if (type == "uniform") {
        require_object(j, path, {"type"});
        return Uniform{};
    }
    if (type == "mixture") {
        require_object(j, path, {"type", "components"});
        const auto cpath = child(path, "components");
        const json &comps = member(j, path, "components");
        if (!comps.is_array() || comps.empty()) {
            fail(cpath, "expected a nonempty array of components");
        }
        std::vector<MixtureComponent> components;
        for (std::size_t k = 0; k < comps.size(); ++k) {
            const auto kpath = child(cpath, k);
            require_object(comps[k], kpath, {"weight", "phi"});
            const double w = get_number(member(comps[k], kpath, "weight"), child(kpath, "weight"));
            components.push_back(
                {w, get_state_vector(member(comps[k], kpath, "phi"), child(kpath, "phi"), dim)});
        }
        try {
            return Mixture(std::move(components));
        } catch (const InvariantError &e) {
            fail(cpath, e.what());
        }
    }
    if (type == "projective_power") {
        require_object(j, path, {"type", "phi", "k"});
        const auto k = get_uint(member(j, path, "k"), child(path, "k"));
        if (k > 1000) {
            fail(child(path, "k"), "exponent too large");
        }
        return WeightedDensity{ProjectivePower{
            get_state_vector(member(j, path, "phi"), child(path, "phi"), dim),
            static_cast<unsigned>(k)}};
    }
    if (type == "exponential_overlap") {
        require_object(j, path, {"type", "phi", "kappa"});
        const double kappa = get_number(member(j, path, "kappa"), child(path, "kappa"));
        try {
            return WeightedDensity{ExponentialOverlap(
                get_state_vector(member(j, path, "phi"), child(path, "phi"), dim), kappa)};
        } catch (const InvariantError &e) {
            fail(child(path, "kappa"), e.what());
        }
    }
    fail(child(path, "type"), "unknown state type '" + type + "'");
}

std::string sha256_hex(const std::string &data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

json base_document(Command command, const ProblemSpec &spec) {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["engine_version"] = kEngineVersion;
    doc["command"] = to_string(command);
    doc["spec_sha256"] = spec.sha256;
    doc["config"] = {{"dim", spec.config.dim()},
                     {"hbar", spec.config.hbar()},
                     {"spin", spec.config.spin()}};
    doc["run"] = {{"seed", spec.run.seed}, {"samples", spec.run.samples}};
    return doc;
}

const ClassicalState &require_state(const ProblemSpec &spec) {
    if (!spec.state) {
        throw SpecError("/state: missing required field");
    }
    return *spec.state;
}

void require_observables(const ProblemSpec &spec) {
    if (spec.observables.empty()) {
        throw SpecError("/observables: at least one observable is required");
    }
}

json vector_json(const Eigen::VectorXd &v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back(v(i));
    }
    return arr;
}

json vector_json(const CVector &v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        arr.push_back(to_json(v(i)));
    }
    return arr;
}

std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return ec == std::errc() ? std::string(buf.data(), end) : std::string("nan");
}

std::string csv_value(const json &j) {
    if (j.is_null()) {
        return "";
    }
    if (j.is_boolean()) {
        return j.get<bool>() ? "true" : "false";
    }
    if (j.is_number()) {
        return format_double(j.get<double>());
    }
    return j.get<std::string>();
}

} // namespace

const char *to_string(Command command) {
    switch (command) {
    case Command::reduce:
        return "reduce";
    case Command::expect:
        return "expect";
    case Command::verify:
        return "verify";
    case Command::evolve:
        return "evolve";
    case Command::moments:
        return "moments";
    }
    return "unknown";
}

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const CMatrix &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(to_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const RMatrix &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const DensityMatrix &rho) {
    return {{"matrix", to_json(rho.matrix())},
            {"hbar", rho.hbar()},
            {"trace", rho.trace()},
            {"min_eigenvalue", rho.min_eigenvalue()}};
}

json to_json(const ReductionReport &report) {
    return {{"method", to_string(report.method)},
            {"estimate", to_json(report.estimate)},
            {"standard_error_real", to_json(report.standard_error_real)},
            {"standard_error_imag", to_json(report.standard_error_imag)},
            {"max_standard_error", report.max_standard_error()},
            {"sample_count", report.sample_count},
            {"seed", report.seed}};
}

json to_json(const VerificationReport &report) {
    json j = {{"classical_value", report.classical_value},
              {"classical_standard_error", report.classical_standard_error},
              {"quantum_value", report.quantum_value},
              {"absolute_difference", report.absolute_difference},
              {"relative_difference", report.relative_difference},
              {"absolute_comparison", report.absolute_comparison},
              {"tolerance", report.tolerance},
              {"sample_count", report.sample_count},
              {"seed", report.seed},
              {"pass", report.pass}};
    j["closed_form_quantum_value"] = report.closed_form_quantum_value
                                         ? json(*report.closed_form_quantum_value)
                                         : json(nullptr);
    return j;
}

json to_json(const MomentReport &report) {
    return {{"mean", to_json(report.mean)},
            {"standard_error_real", to_json(report.standard_error_real)},
            {"standard_error_imag", to_json(report.standard_error_imag)},
            {"max_deviation", report.max_deviation},
            {"max_standard_error", report.max_standard_error},
            {"count", report.count},
            {"within_envelope", report.within_envelope()}};
}

std::string matrix_csv(const CMatrix &m) {
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) {
                out += ',';
            }
            out += format_double(m(r, c).real());
            out += ',';
            out += format_double(m(r, c).imag());
        }
        out += '\n';
    }
    return out;
}

namespace {

ProblemSpec parse_document(json doc, const Overrides &overrides) {
    require_object(doc, "", {"schema_version", "config", "state", "observables", "run"});
    if (const json *v = optional_member(doc, "schema_version")) {
        if (get_uint(*v, "/schema_version") != static_cast<std::uint64_t>(kSchemaVersion)) {
            fail("/schema_version", "unsupported schema version");
        }
    }

    // Fold command-line overrides into the document so the hash covers them.
    if (overrides.hbar) {
        doc["config"]["hbar"] = *overrides.hbar;
    }
    if (overrides.seed) {
        doc["run"]["seed"] = *overrides.seed;
    }
    if (overrides.samples) {
        doc["run"]["samples"] = *overrides.samples;
    }
    if (overrides.tolerance) {
        doc["run"]["tolerance"] = *overrides.tolerance;
    }
    if (overrides.compare) {
        doc["run"]["compare"] = true;
    }

    const json &cfg = member(doc, "", "config");
    require_object(cfg, "/config", {"dim", "hbar"});
    const auto dim_raw = get_uint(member(cfg, "/config", "dim"), "/config/dim");
    if (dim_raw < 1 || dim_raw > 4096) {
        fail("/config/dim", "dimension must be between 1 and 4096");
    }
    const int dim = static_cast<int>(dim_raw);
    double hbar = 1.0;
    if (const json *h = optional_member(cfg, "hbar")) {
        hbar = get_number(*h, "/config/hbar");
        if (!(hbar > 0.0)) {
            fail("/config/hbar", "hbar must be positive");
        }
    }

    ProblemSpec spec{ModelConfig(dim, hbar), std::nullopt, {}, {}, {}};

    if (const json *s = optional_member(doc, "state")) {
        spec.state = parse_state(*s, "/state", dim);
    }

    if (const json *obs = optional_member(doc, "observables")) {
        if (!obs->is_array()) {
            fail("/observables", "expected an array");
        }
        for (std::size_t k = 0; k < obs->size(); ++k) {
            const auto opath = child("/observables", k);
            const json &o = (*obs)[k];
            require_object(o, opath, {"label", "matrix"});
            std::string label = "A" + std::to_string(k);
            if (const json *l = optional_member(o, "label")) {
                if (!l->is_string()) {
                    fail(child(opath, "label"), "expected a string");
                }
                label = l->get<std::string>();
            }
            CMatrix m = get_cmatrix(member(o, opath, "matrix"), child(opath, "matrix"), dim);
            try {
                spec.observables.emplace_back(m, std::move(label));
            } catch (const InvariantError &e) {
                fail(child(opath, "matrix"), e.what());
            }
        }
    }

    if (const json *r = optional_member(doc, "run")) {
        require_object(*r, "/run",
                       {"seed", "samples", "tolerance", "times", "initial", "phase_point",
                        "unitary_seed", "compare"});
        RunParams &run = spec.run;
        if (const json *v = optional_member(*r, "seed")) {
            run.seed = get_uint(*v, "/run/seed");
        }
        if (const json *v = optional_member(*r, "samples")) {
            run.samples = static_cast<std::size_t>(get_uint(*v, "/run/samples"));
            if (run.samples == 0) {
                fail("/run/samples", "sample count must be at least 1");
            }
        }
        if (const json *v = optional_member(*r, "tolerance")) {
            run.tolerance = get_number(*v, "/run/tolerance");
            if (!(run.tolerance >= 0.0)) {
                fail("/run/tolerance", "tolerance must be nonnegative");
            }
        }
        if (const json *v = optional_member(*r, "times")) {
            if (!v->is_array()) {
                fail("/run/times", "expected an array of numbers");
            }
            for (std::size_t i = 0; i < v->size(); ++i) {
                run.times.push_back(get_number((*v)[i], child("/run/times", i)));
            }
        }
        if (const json *v = optional_member(*r, "initial")) {
            run.initial = get_state_vector(*v, "/run/initial", dim);
        }
        if (const json *v = optional_member(*r, "phase_point")) {
            require_object(*v, "/run/phase_point", {"q", "p"});
            PhasePoint point(get_rvector(member(*v, "/run/phase_point", "q"), "/run/phase_point/q", dim),
                             get_rvector(member(*v, "/run/phase_point", "p"), "/run/phase_point/p", dim));
            if (!point.on_shell(spec.config)) {
                fail("/run/phase_point", "phase point is off the energy shell sum(p^2+q^2) = hbar");
            }
            run.phase_point = std::move(point);
        }
        if (const json *v = optional_member(*r, "unitary_seed")) {
            run.unitary_seed = get_uint(*v, "/run/unitary_seed");
        }
        if (const json *v = optional_member(*r, "compare")) {
            if (!v->is_boolean()) {
                fail("/run/compare", "expected a boolean");
            }
            run.compare = v->get<bool>();
        }
    }

    spec.sha256 = sha256_hex(doc.dump());
    return spec;
}

} // namespace

ProblemSpec parse_spec(const json &input, const Overrides &overrides) {
    try {
        return parse_document(input, overrides);
    } catch (const json::exception &e) {
        throw SpecError(std::string("/: ") + e.what());
    }
}

ProblemSpec parse_spec_text(const std::string &text, const Overrides &overrides) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw SpecError(std::string("parse error: ") + e.what());
    }
    return parse_spec(doc, overrides);
}

ProblemSpec load_spec(const std::filesystem::path &path, const Overrides &overrides) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open spec file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_spec_text(buffer.str(), overrides);
    } catch (const SpecError &e) {
        throw SpecError(path.string() + ":" + e.what());
    }
}

RunReport cmd_reduce(const ProblemSpec &spec) {
    const ClassicalState &state = require_state(spec);
    json doc = base_document(Command::reduce, spec);
    json results;
    results["state_type"] = variant_name(state);

    const bool analytic = !std::holds_alternative<WeightedDensity>(state);
    std::optional<DensityMatrix> closed;
    if (analytic) {
        closed = reduce_closed_form(state, spec.config);
        results["closed_form"] = to_json(*closed);
    } else {
        results["closed_form"] = nullptr;
    }

    std::optional<ReductionReport> mc;
    if (!analytic || spec.run.compare) {
        mc = reduce_monte_carlo(state, spec.config, spec.run.seed, spec.run.samples);
        results["monte_carlo"] = to_json(*mc);
    } else {
        results["monte_carlo"] = nullptr;
    }

    if (closed && mc) {
        const CMatrix diff = mc->estimate.matrix() - closed->matrix();
        bool within = true;
        const double floor = 1e-12 * std::max(1.0, spec.config.hbar());
        for (Eigen::Index m = 0; m < diff.rows(); ++m) {
            for (Eigen::Index n = 0; n < diff.cols(); ++n) {
                within = within &&
                         std::abs(diff(m, n).real()) <=
                             kSigmaEnvelope * mc->standard_error_real(m, n) + floor &&
                         std::abs(diff(m, n).imag()) <=
                             kSigmaEnvelope * mc->standard_error_imag(m, n) + floor;
            }
        }
        results["comparison"] = {{"max_deviation", detail::max_abs(diff)},
                                 {"max_standard_error", mc->max_standard_error()},
                                 {"sigma_envelope", kSigmaEnvelope},
                                 {"within_envelope", within}};
    } else {
        results["comparison"] = nullptr;
    }
    doc["results"] = std::move(results);
    return {Command::reduce, std::move(doc), kExitOk};
}

RunReport cmd_expect(const ProblemSpec &spec) {
    const ClassicalState &state = require_state(spec);
    require_observables(spec);
    if (spec.run.samples < 2) {
        throw SpecError("/run/samples: expect needs at least 2 samples");
    }
    const SampleBatch batch = draw_samples(state, spec.config, spec.run.seed, spec.run.samples);
    const ReductionReport reduced = reduce_batch(batch, spec.config);
    std::optional<DensityMatrix> closed;
    if (!std::holds_alternative<WeightedDensity>(state)) {
        closed = reduce_closed_form(state, spec.config);
    }

    json doc = base_document(Command::expect, spec);
    json rows = json::array();
    for (const auto &a : spec.observables) {
        const Expectation classical = classical_expectation(a, batch, spec.config);
        json row = {{"label", a.label()},
                    {"classical", {{"value", classical.value},
                                   {"standard_error", classical.standard_error}}},
                    {"quantum_monte_carlo", quantum_expectation(a, reduced.estimate)}};
        row["quantum_closed_form"] = closed ? json(quantum_expectation(a, *closed)) : json(nullptr);
        rows.push_back(std::move(row));
    }
    doc["results"] = {{"state_type", variant_name(state)}, {"observables", std::move(rows)}};
    return {Command::expect, std::move(doc), kExitOk};
}

RunReport cmd_verify(const ProblemSpec &spec) {
    const ClassicalState &state = require_state(spec);
    require_observables(spec);
    json doc = base_document(Command::verify, spec);
    json rows = json::array();
    bool all_pass = true;
    for (const auto &a : spec.observables) {
        const auto report = born_rule_verify(a, state, spec.config, spec.run.seed,
                                             spec.run.samples, spec.run.tolerance);
        all_pass = all_pass && report.pass;
        json row = to_json(report);
        row["label"] = a.label();
        rows.push_back(std::move(row));
    }
    doc["results"] = {{"state_type", variant_name(state)},
                      {"tolerance", spec.run.tolerance},
                      {"all_pass", all_pass},
                      {"observables", std::move(rows)}};
    return {Command::verify, std::move(doc), all_pass ? kExitOk : kExitVerificationFailed};
}

RunReport cmd_evolve(const ProblemSpec &spec) {
    require_observables(spec);
    if (spec.run.times.empty()) {
        throw SpecError("/run/times: evolve needs at least one time");
    }
    std::optional<StateVector> initial = spec.run.initial;
    if (!initial && spec.run.phase_point) {
        initial = to_sphere(*spec.run.phase_point, spec.config);
    }
    if (!initial) {
        throw SpecError("/run/initial: evolve needs run.initial or run.phase_point");
    }
    const ModelConfig &config = spec.config;

    json doc = base_document(Command::evolve, spec);
    json flows = json::array();
    for (const auto &a : spec.observables) {
        const double f0 = evaluate_form(a, *initial, config);
        double max_norm_error = 0.0;
        double max_drift = 0.0;
        json trajectory = json::array();
        for (double t : spec.run.times) {
            const FlowResult r = generate_flow(a, t, *initial, config);
            const double norm_error = std::abs(r.state.amplitudes().squaredNorm() - 1.0);
            const double f = evaluate_form(a, r.state, config);
            max_norm_error = std::max(max_norm_error, norm_error);
            max_drift = std::max(max_drift, relative_difference(f0, f));
            trajectory.push_back({{"time", t},
                                  {"state", vector_json(r.state.amplitudes())},
                                  {"norm_error", norm_error},
                                  {"form_value", f}});
        }
        flows.push_back({{"generator", a.label()},
                         {"trajectory", std::move(trajectory)},
                         {"max_norm_error", max_norm_error},
                         {"max_form_drift", max_drift}});
    }

    // Free oscillator motion of the same initial point, checked against the
    // sphere flow generated by A = I/2.
    const PhasePoint x0 = spec.run.phase_point ? *spec.run.phase_point : from_sphere(*initial, config);
    const HermitianObservable half(CMatrix::Identity(config.dim(), config.dim()) / 2.0, "I/2");
    const StateVector psi0 = to_sphere(x0, config);
    const double e0 = shell_energy(x0);
    double max_energy_drift = 0.0;
    double max_square = 0.0;
    json osc = json::array();
    for (double t : spec.run.times) {
        const PhasePoint xt = oscillator_evolve(x0, t, config);
        const double e = shell_energy(xt);
        const CVector via_phase = to_sphere(xt, config).amplitudes();
        const CVector via_flow = generate_flow(half, t, psi0, config).state.amplitudes();
        const double square = (via_phase - via_flow).cwiseAbs().maxCoeff();
        max_energy_drift = std::max(max_energy_drift, std::abs(e - e0) / e0);
        max_square = std::max(max_square, square);
        osc.push_back({{"time", t},
                       {"q", vector_json(xt.q())},
                       {"p", vector_json(xt.p())},
                       {"energy", e},
                       {"commuting_square_residue", square}});
    }

    doc["results"] = {{"initial", vector_json(initial->amplitudes())},
                      {"flows", std::move(flows)},
                      {"oscillator",
                       {{"shell_energy", config.hbar() / 2.0},
                        {"trajectory", std::move(osc)},
                        {"max_energy_drift", max_energy_drift},
                        {"max_commuting_square_residue", max_square}}}};
    return {Command::evolve, std::move(doc), kExitOk};
}

RunReport cmd_moments(const ProblemSpec &spec) {
    const SampleBatch batch = sample_uniform(spec.config, spec.run.seed, spec.run.samples);
    const MomentReport plain = moment_report(batch, spec.config);
    const std::uint64_t useed = spec.run.unitary_seed.value_or(spec.run.seed);
    const CMatrix u = random_unitary(spec.config.dim(), useed);
    const MomentReport rotated = moment_report(transform(batch, u), spec.config);
    const CMatrix defect =
        u.adjoint() * u - CMatrix::Identity(spec.config.dim(), spec.config.dim());
    const bool pass = plain.within_envelope() && rotated.within_envelope();

    json doc = base_document(Command::moments, spec);
    doc["results"] = {{"sigma_envelope", kSigmaEnvelope},
                      {"uniform", to_json(plain)},
                      {"unitary_seed", useed},
                      {"unitary_defect", detail::max_abs(defect)},
                      {"transformed", to_json(rotated)},
                      {"pass", pass}};
    return {Command::moments, std::move(doc), pass ? kExitOk : kExitVerificationFailed};
}

RunReport run(Command command, const ProblemSpec &spec) {
    switch (command) {
    case Command::reduce:
        return cmd_reduce(spec);
    case Command::expect:
        return cmd_expect(spec);
    case Command::verify:
        return cmd_verify(spec);
    case Command::evolve:
        return cmd_evolve(spec);
    case Command::moments:
        return cmd_moments(spec);
    }
    throw Error("unknown command");
}

std::string render(const RunReport &report, Format format) {
    if (format == Format::json) {
        return report.document.dump(2) + "\n";
    }
    const json &results = report.document.at("results");
    switch (report.command) {
    case Command::reduce: {
        const json &mc = results.at("monte_carlo");
        const json &matrix = mc.is_null() ? results.at("closed_form").at("matrix")
                                          : mc.at("estimate").at("matrix");
        std::string out;
        for (const auto &row : matrix) {
            bool first = true;
            for (const auto &cell : row) {
                out += (first ? "" : ",") + csv_value(cell[0]) + "," + csv_value(cell[1]);
                first = false;
            }
            out += '\n';
        }
        return out;
    }
    case Command::moments: {
        std::string out;
        for (const auto &row : results.at("uniform").at("mean")) {
            bool first = true;
            for (const auto &cell : row) {
                out += (first ? "" : ",") + csv_value(cell[0]) + "," + csv_value(cell[1]);
                first = false;
            }
            out += '\n';
        }
        return out;
    }
    case Command::expect: {
        std::string out = "label,classical,classical_standard_error,quantum_monte_carlo,"
                          "quantum_closed_form\n";
        for (const auto &row : results.at("observables")) {
            out += csv_value(row.at("label")) + "," +
                   csv_value(row.at("classical").at("value")) + "," +
                   csv_value(row.at("classical").at("standard_error")) + "," +
                   csv_value(row.at("quantum_monte_carlo")) + "," +
                   csv_value(row.at("quantum_closed_form")) + "\n";
        }
        return out;
    }
    case Command::verify: {
        std::string out = "label,classical,quantum,absolute_difference,relative_difference,pass\n";
        for (const auto &row : results.at("observables")) {
            out += csv_value(row.at("label")) + "," + csv_value(row.at("classical_value")) + "," +
                   csv_value(row.at("quantum_value")) + "," +
                   csv_value(row.at("absolute_difference")) + "," +
                   csv_value(row.at("relative_difference")) + "," + csv_value(row.at("pass")) +
                   "\n";
        }
        return out;
    }
    case Command::evolve:
        break;
    }
    throw Error("csv output is not available for the evolve command");
}

} // namespace phaseborn::cli
