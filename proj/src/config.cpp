#include "sdelab/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sdelab/errors.hpp"

namespace sdelab {

std::string_view to_string(RecursionKind kind) {
    switch (kind) {
        case RecursionKind::Linear: return "linear";
        case RecursionKind::Nonlinear: return "nonlinear";
        case RecursionKind::Ito: return "ito";
        case RecursionKind::Deterministic: return "deterministic";
    }
    return "linear";
}

namespace {

using LineMap = std::map<std::string, int>;

RecursionKind recursion_kind_from_string(std::string_view name) {
    for (RecursionKind k : {RecursionKind::Linear, RecursionKind::Nonlinear, RecursionKind::Ito,
                            RecursionKind::Deterministic})
        if (to_string(k) == name) return k;
    throw InvalidArgument("unknown equation kind '" + std::string(name) +
                          "' (expected linear, nonlinear, ito or deterministic)");
}

int line_of(const YAML::Node& node) {
    const YAML::Mark mark = node.Mark();
    return mark.is_null() ? 0 : mark.line + 1;
}

class Parser {
public:
    LineMap lines;

    void require_map(const YAML::Node& node, const std::string& field) {
        if (!node.IsMap()) throw ConfigError(field, "expected a table", line_of(node));
        lines.emplace(field, line_of(node));
    }

    void check_keys(const YAML::Node& table, const std::string& field,
                    std::initializer_list<std::string_view> allowed) {
        for (const auto& kv : table) {
            const std::string key = kv.first.as<std::string>();
            bool known = false;
            for (std::string_view a : allowed) known = known || a == key;
            if (!known) throw ConfigError(join(field, key), "unknown key", line_of(kv.first));
            lines[join(field, key)] = line_of(kv.second);
        }
    }

    static std::string join(const std::string& field, const std::string& key) {
        return field.empty() ? key : field + "." + key;
    }

    std::string get_string(const YAML::Node& node, const std::string& field) {
        if (!node.IsScalar()) throw ConfigError(field, "expected a scalar", line_of(node));
        return node.Scalar();
    }

    ScheduleExpr get_schedule(const YAML::Node& node, const std::string& field) {
        const std::string text = get_string(node, field);
        try {
            return ScheduleExpr::parse(text);
        } catch (const Error& e) {
            throw ConfigError(field, e.what(), line_of(node));
        }
    }

    double get_number(const YAML::Node& node, const std::string& field) {
        const ScheduleExpr e = get_schedule(node, field);
        if (!e.is_constant()) throw ConfigError(field, "expected a number", line_of(node));
        return e(1);
    }

    std::uint64_t get_count(const YAML::Node& node, const std::string& field) {
        const double v = get_number(node, field);
        if (!(v >= 0.0) || v != std::floor(v) || v > 1.8e19)
            throw ConfigError(field, "expected a non-negative integer", line_of(node));
        return static_cast<std::uint64_t>(v);
    }

    bool get_bool(const YAML::Node& node, const std::string& field) {
        try {
            return node.as<bool>();
        } catch (const YAML::Exception&) {
            throw ConfigError(field, "expected true or false", line_of(node));
        }
    }

    template <class T, class Fn>
    std::vector<T> get_list(const YAML::Node& node, const std::string& field, Fn&& element) {
        if (!node.IsSequence()) throw ConfigError(field, "expected a list", line_of(node));
        std::vector<T> out;
        for (std::size_t i = 0; i < node.size(); ++i)
            out.push_back(element(node[i], field + "[" + std::to_string(i) + "]"));
        return out;
    }

    template <class Fn>
    auto wrap(const YAML::Node& node, const std::string& field, Fn&& fn) {
        try {
            return fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(field, e.what(), line_of(node));
        }
    }

    SequenceFamily get_sequence(const YAML::Node& node, const std::string& field) {
        require_map(node, field);
        if (!node["family"]) throw ConfigError(field + ".family", "missing", line_of(node));
        const std::string family = get_string(node["family"], field + ".family");
        if (family == "power_law") {
            check_keys(node, field, {"family", "c", "p"});
            return PowerLaw{need_number(node, field, "c"), need_number(node, field, "p")};
        }
        if (family == "constant") {
            check_keys(node, field, {"family", "c"});
            return PowerLaw{need_number(node, field, "c"), 0.0};
        }
        if (family == "geometric") {
            check_keys(node, field, {"family", "c", "r"});
            return Geometric{need_number(node, field, "c"), need_number(node, field, "r")};
        }
        if (family == "table") {
            check_keys(node, field, {"family", "values"});
            if (!node["values"]) throw ConfigError(field + ".values", "missing", line_of(node));
            return Table{get_list<double>(node["values"], field + ".values",
                                          [&](const YAML::Node& n, const std::string& f) { return get_number(n, f); })};
        }
        if (family == "zero") {
            check_keys(node, field, {"family"});
            return Zero{};
        }
        throw ConfigError(field + ".family",
                          "unknown sequence family '" + family + "' (expected power_law, constant, geometric, table or zero)",
                          line_of(node["family"]));
    }

    double need_number(const YAML::Node& table, const std::string& field, const char* key) {
        if (!table[key]) throw ConfigError(join(field, key), "missing", line_of(table));
        return get_number(table[key], join(field, key));
    }

    EquationConfig get_equation(const YAML::Node& node) {
        require_map(node, "equation");
        check_keys(node, "equation", {"kind", "x0", "f", "drift", "step", "a"});
        EquationConfig eq;
        if (!node["kind"]) throw ConfigError("equation.kind", "missing", line_of(node));
        eq.kind = wrap(node["kind"], "equation.kind",
                       [&] { return recursion_kind_from_string(get_string(node["kind"], "equation.kind")); });
        if (node["x0"]) eq.x0 = get_number(node["x0"], "equation.x0");
        if (node["f"])
            eq.f = wrap(node["f"], "equation.f",
                        [&] { return feedback_kind_from_string(get_string(node["f"], "equation.f")); });
        if (node["drift"]) eq.drift = get_number(node["drift"], "equation.drift");
        if (node["step"]) eq.step = get_number(node["step"], "equation.step");
        if (node["a"]) eq.a = get_sequence(node["a"], "equation.a");
        return eq;
    }

    NoiseConfig get_noise(const YAML::Node& node) {
        require_map(node, "noise");
        if (!node["family"]) throw ConfigError("noise.family", "missing", line_of(node));
        NoiseConfig noise;
        noise.family = wrap(node["family"], "noise.family",
                            [&] { return noise_family_from_string(get_string(node["family"], "noise.family")); });
        const auto names = NoiseModel::parameter_names(noise.family);
        for (const auto& kv : node) {
            const std::string key = kv.first.as<std::string>();
            bool known = key == "family";
            for (std::string_view n : names) known = known || n == key;
            if (!known) throw ConfigError("noise." + key, "unknown key for this noise family", line_of(kv.first));
            lines["noise." + key] = line_of(kv.second);
        }
        for (std::string_view name : names) {
            const std::string field = "noise." + std::string(name);
            const YAML::Node value = node[std::string(name)];
            if (!value) throw ConfigError(field, "missing", line_of(node));
            noise.params.push_back(get_schedule(value, field));
        }
        return noise;
    }

    AnalysisConfig get_analysis(const YAML::Node& node) {
        require_map(node, "analysis");
        check_keys(node, "analysis", {"alpha", "gamma_decay", "theorems", "n_tail", "moment_indices", "lemma45_k"});
        AnalysisConfig a;
        if (node["alpha"]) a.alpha = get_number(node["alpha"], "analysis.alpha");
        if (node["gamma_decay"]) a.gamma_decay = get_number(node["gamma_decay"], "analysis.gamma_decay");
        if (node["theorems"])
            a.theorems = get_list<TheoremId>(node["theorems"], "analysis.theorems",
                                             [&](const YAML::Node& n, const std::string& f) {
                                                 return wrap(n, f, [&] { return theorem_id_from_string(get_string(n, f)); });
                                             });
        if (node["n_tail"]) a.n_tail = get_count(node["n_tail"], "analysis.n_tail");
        if (node["moment_indices"])
            a.moment_indices = get_list<std::uint64_t>(
                node["moment_indices"], "analysis.moment_indices",
                [&](const YAML::Node& n, const std::string& f) { return get_count(n, f); });
        if (node["lemma45_k"]) a.lemma45_k = get_number(node["lemma45_k"], "analysis.lemma45_k");
        return a;
    }

    EnsembleConfig get_ensemble(const YAML::Node& node) {
        require_map(node, "ensemble");
        check_keys(node, "ensemble",
                   {"horizon", "replicas", "master_seed", "eps_conv", "window", "c_div", "checkpoints",
                    "exceed_thresholds", "track_martingale", "threads", "decay_check", "probe_p_grid"});
        EnsembleConfig e;
        const auto count = [&](const YAML::Node& n, const std::string& f) { return get_count(n, f); };
        const auto number = [&](const YAML::Node& n, const std::string& f) { return get_number(n, f); };
        if (node["horizon"]) e.horizon = get_count(node["horizon"], "ensemble.horizon");
        if (node["replicas"]) e.replicas = get_count(node["replicas"], "ensemble.replicas");
        if (node["master_seed"]) e.master_seed = get_seed(node["master_seed"], "ensemble.master_seed");
        if (node["eps_conv"]) e.surrogate.eps_conv = get_number(node["eps_conv"], "ensemble.eps_conv");
        if (node["window"]) e.surrogate.window = get_count(node["window"], "ensemble.window");
        if (node["c_div"]) e.surrogate.c_div = get_number(node["c_div"], "ensemble.c_div");
        if (node["checkpoints"])
            e.checkpoints = get_list<std::uint64_t>(node["checkpoints"], "ensemble.checkpoints", count);
        if (node["exceed_thresholds"])
            e.exceed_thresholds = get_list<double>(node["exceed_thresholds"], "ensemble.exceed_thresholds", number);
        if (node["track_martingale"])
            e.track_martingale = get_bool(node["track_martingale"], "ensemble.track_martingale");
        if (node["threads"]) e.threads = static_cast<unsigned>(get_count(node["threads"], "ensemble.threads"));
        if (node["decay_check"]) e.decay_check = get_bool(node["decay_check"], "ensemble.decay_check");
        if (node["probe_p_grid"])
            e.probe_p_grid = get_list<double>(node["probe_p_grid"], "ensemble.probe_p_grid", number);
        return e;
    }

    std::uint64_t get_seed(const YAML::Node& node, const std::string& field) {
        try {
            return node.as<std::uint64_t>();
        } catch (const YAML::Exception&) {
            throw ConfigError(field, "expected a non-negative integer", line_of(node));
        }
    }

    OutputConfig get_output(const YAML::Node& node) {
        require_map(node, "output");
        check_keys(node, "output", {"directory", "stride", "trajectories"});
        OutputConfig o;
        if (node["directory"]) o.directory = get_string(node["directory"], "output.directory");
        if (node["stride"]) o.stride = get_count(node["stride"], "output.stride");
        if (node["trajectories"]) o.trajectories = get_bool(node["trajectories"], "output.trajectories");
        return o;
    }
};

int line_for(const LineMap& lines, std::string field) {
    while (true) {
        const auto it = lines.find(field);
        if (it != lines.end()) return it->second;
        const auto dot = field.rfind('.');
        if (dot == std::string::npos) return 0;
        field.resize(dot);
    }
}

void validate_impl(const RunConfig& c, const LineMap& lines) {
    const auto fail = [&](const std::string& field, const std::string& message) {
        throw ConfigError(field, message, line_for(lines, field));
    };
    const EquationConfig& eq = c.equation;
    if (!(eq.x0 > 0.0) || !std::isfinite(eq.x0)) fail("equation.x0", "must be positive and finite");
    if (eq.kind == RecursionKind::Deterministic) {
        if (!eq.a) fail("equation.a", "required for the deterministic recursion");
    } else if (!c.noise) {
        fail("noise", "required for the " + std::string(to_string(eq.kind)) + " recursion");
    }
    if (eq.kind == RecursionKind::Ito) {
        if (!(eq.drift >= 0.0)) fail("equation.drift", "must be >= 0");
        if (!(eq.step > 0.0)) fail("equation.step", "must be > 0");
    }

    if (c.noise) {
        try {
            build_noise(c);
        } catch (const Error& e) {
            fail("noise", e.what());
        }
    }
    try {
        build_forcing(c);
    } catch (const Error& e) {
        fail("free_coefficient", e.what());
    }
    if (c.kappa) {
        try {
            build_kappa(c);
        } catch (const Error& e) {
            fail("kappa", e.what());
        }
    }
    try {
        build_equation(c);
    } catch (const Error& e) {
        fail(eq.kind == RecursionKind::Deterministic ? "equation.a" : "noise", e.what());
    }

    const EnsembleConfig& en = c.ensemble;
    if (en.horizon < 1) fail("ensemble.horizon", "must be >= 1");
    if (en.replicas < 1) fail("ensemble.replicas", "must be >= 1");
    if (!(en.surrogate.eps_conv > 0.0)) fail("ensemble.eps_conv", "must be > 0");
    if (!(en.surrogate.c_div > en.surrogate.eps_conv)) fail("ensemble.c_div", "must exceed ensemble.eps_conv");
    if (en.surrogate.window < 1) fail("ensemble.window", "must be >= 1");
    for (std::uint64_t cp : en.checkpoints)
        if (cp > en.horizon) fail("ensemble.checkpoints", "checkpoint " + std::to_string(cp) + " exceeds the horizon");
    for (double p : en.probe_p_grid)
        if (!(p > 0.0)) fail("ensemble.probe_p_grid", "exponents must be > 0");
    if (c.output.stride < 1) fail("output.stride", "must be >= 1");

    const AnalysisConfig& an = c.analysis;
    if (an.n_tail < 10) fail("analysis.n_tail", "must be >= 10");
    for (std::uint64_t n : an.moment_indices)
        if (n < 1) fail("analysis.moment_indices", "indices start at 1");
    if (an.lemma45_k && !(*an.lemma45_k > 0.0)) fail("analysis.lemma45_k", "must be > 0");
    if (an.alpha && !(*an.alpha > 0.0)) fail("analysis.alpha", "must be > 0");

    const auto need_alpha = [&](TheoremId id) {
        if (!an.alpha) fail("analysis.alpha", "required by " + std::string(to_string(id)));
        return *an.alpha;
    };
    const auto need_noise = [&](TheoremId id) {
        if (!c.noise) fail("noise", "required by " + std::string(to_string(id)));
    };
    for (TheoremId id : an.theorems) {
        switch (id) {
            case TheoremId::T3_1:
                need_noise(id);
                need_alpha(id);
                break;
            case TheoremId::T3_2: {
                need_noise(id);
                const double a = need_alpha(id);
                if (!(a > 0.0 && a <= 1.0)) fail("analysis.alpha", "T3_2 requires alpha in (0,1]");
                if (!an.gamma_decay) fail("analysis.gamma_decay", "required by T3_2");
                if (!(*an.gamma_decay > 0.0 && *an.gamma_decay < 1.0))
                    fail("analysis.gamma_decay", "must lie in (0,1)");
                if (!c.kappa) fail("kappa", "required by T3_2");
                break;
            }
            case TheoremId::T4_2:
            case TheoremId::T4_3:
            case TheoremId::T5_1: need_noise(id); break;
            case TheoremId::T5_2: {
                need_noise(id);
                const double a = need_alpha(id);
                if (!(a > 0.0 && a < 1.0)) fail("analysis.alpha", "T5_2 requires alpha in (0,1)");
                break;
            }
            case TheoremId::T5_4:
                if (eq.kind != RecursionKind::Ito) fail("equation.kind", "T5_4 requires the ito recursion");
                need_alpha(id);
                break;
            case TheoremId::L6_1:
                if (eq.kind != RecursionKind::Deterministic)
                    fail("equation.kind", "L6_1 requires the deterministic recursion");
                break;
        }
    }
    if (en.decay_check) {
        if (eq.kind != RecursionKind::Linear) fail("ensemble.decay_check", "requires the linear recursion");
        if (!c.kappa) fail("kappa", "required by ensemble.decay_check");
        if (!an.alpha) fail("analysis.alpha", "required by ensemble.decay_check");
        if (!an.gamma_decay) fail("analysis.gamma_decay", "required by ensemble.decay_check");
        if (en.checkpoints.empty()) fail("ensemble.checkpoints", "required by ensemble.decay_check");
    }
}

void emit_sequence(YAML::Emitter& out, const SequenceFamily& family) {
    out << YAML::BeginMap;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PowerLaw>) {
                out << YAML::Key << "family" << YAML::Value << "power_law";
                out << YAML::Key << "c" << YAML::Value << format_double(s.c);
                out << YAML::Key << "p" << YAML::Value << format_double(s.p);
            } else if constexpr (std::is_same_v<T, Geometric>) {
                out << YAML::Key << "family" << YAML::Value << "geometric";
                out << YAML::Key << "c" << YAML::Value << format_double(s.c);
                out << YAML::Key << "r" << YAML::Value << format_double(s.r);
            } else if constexpr (std::is_same_v<T, Table>) {
                out << YAML::Key << "family" << YAML::Value << "table";
                out << YAML::Key << "values" << YAML::Value << YAML::Flow << YAML::BeginSeq;
                for (double v : s.values) out << format_double(v);
                out << YAML::EndSeq;
            } else {
                out << YAML::Key << "family" << YAML::Value << "zero";
            }
        },
        family);
    out << YAML::EndMap;
}

template <class T, class Fmt>
void emit_list(YAML::Emitter& out, const char* key, const std::vector<T>& values, Fmt&& fmt) {
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const T& v : values) out << fmt(v);
    out << YAML::EndSeq;
}

}  // namespace

RunConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError("<document>", e.msg, e.mark.is_null() ? 0 : e.mark.line + 1);
    }
    if (!root.IsMap()) throw ConfigError("<document>", "expected a top-level table", line_of(root));

    Parser p;
    p.check_keys(root, "", {"equation", "noise", "free_coefficient", "kappa", "analysis", "ensemble", "output"});
    RunConfig config;
    if (!root["equation"]) throw ConfigError("equation", "missing", 0);
    config.equation = p.get_equation(root["equation"]);
    if (root["noise"]) config.noise = p.get_noise(root["noise"]);
    if (root["free_coefficient"]) config.free_coefficient = p.get_sequence(root["free_coefficient"], "free_coefficient");
    if (root["kappa"]) config.kappa = p.get_sequence(root["kappa"], "kappa");
    if (root["analysis"]) config.analysis = p.get_analysis(root["analysis"]);
    if (root["ensemble"]) config.ensemble = p.get_ensemble(root["ensemble"]);
    if (root["output"]) config.output = p.get_output(root["output"]);
    validate_impl(config, p.lines);
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<file>", "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void validate_config(const RunConfig& config) { validate_impl(config, {}); }

std::string dump_config(const RunConfig& c) {
    YAML::Emitter out;
    out << YAML::BeginMap;

    out << YAML::Key << "equation" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(c.equation.kind));
    out << YAML::Key << "x0" << YAML::Value << format_double(c.equation.x0);
    out << YAML::Key << "f" << YAML::Value << std::string(to_string(c.equation.f));
    out << YAML::Key << "drift" << YAML::Value << format_double(c.equation.drift);
    out << YAML::Key << "step" << YAML::Value << format_double(c.equation.step);
    if (c.equation.a) {
        out << YAML::Key << "a" << YAML::Value;
        emit_sequence(out, *c.equation.a);
    }
    out << YAML::EndMap;

    if (c.noise) {
        out << YAML::Key << "noise" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "family" << YAML::Value << std::string(to_string(c.noise->family));
        const auto names = NoiseModel::parameter_names(c.noise->family);
        for (std::size_t i = 0; i < names.size() && i < c.noise->params.size(); ++i)
            out << YAML::Key << std::string(names[i]) << YAML::Value << c.noise->params[i].to_string();
        out << YAML::EndMap;
    }

    out << YAML::Key << "free_coefficient" << YAML::Value;
    emit_sequence(out, c.free_coefficient);
    if (c.kappa) {
        out << YAML::Key << "kappa" << YAML::Value;
        emit_sequence(out, *c.kappa);
    }

    const auto num = [](double v) { return format_double(v); };
    const auto idx = [](std::uint64_t v) { return std::to_string(v); };

    out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
    if (c.analysis.alpha) out << YAML::Key << "alpha" << YAML::Value << num(*c.analysis.alpha);
    if (c.analysis.gamma_decay) out << YAML::Key << "gamma_decay" << YAML::Value << num(*c.analysis.gamma_decay);
    emit_list(out, "theorems", c.analysis.theorems, [](TheoremId id) { return std::string(to_string(id)); });
    out << YAML::Key << "n_tail" << YAML::Value << idx(c.analysis.n_tail);
    emit_list(out, "moment_indices", c.analysis.moment_indices, idx);
    if (c.analysis.lemma45_k) out << YAML::Key << "lemma45_k" << YAML::Value << num(*c.analysis.lemma45_k);
    out << YAML::EndMap;

    const EnsembleConfig& e = c.ensemble;
    out << YAML::Key << "ensemble" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "horizon" << YAML::Value << idx(e.horizon);
    out << YAML::Key << "replicas" << YAML::Value << idx(e.replicas);
    out << YAML::Key << "master_seed" << YAML::Value << idx(e.master_seed);
    out << YAML::Key << "eps_conv" << YAML::Value << num(e.surrogate.eps_conv);
    out << YAML::Key << "window" << YAML::Value << idx(e.surrogate.window);
    out << YAML::Key << "c_div" << YAML::Value << num(e.surrogate.c_div);
    emit_list(out, "checkpoints", e.checkpoints, idx);
    emit_list(out, "exceed_thresholds", e.exceed_thresholds, num);
    out << YAML::Key << "track_martingale" << YAML::Value << e.track_martingale;
    out << YAML::Key << "threads" << YAML::Value << idx(e.threads);
    out << YAML::Key << "decay_check" << YAML::Value << e.decay_check;
    emit_list(out, "probe_p_grid", e.probe_p_grid, num);
    out << YAML::EndMap;

    out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "directory" << YAML::Value << c.output.directory;
    out << YAML::Key << "stride" << YAML::Value << idx(c.output.stride);
    out << YAML::Key << "trajectories" << YAML::Value << c.output.trajectories;
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

NoiseModel build_noise(const RunConfig& config) {
    if (!config.noise) throw InvalidArgument("no noise configured");
    return NoiseModel::make(config.noise->family, config.noise->params);
}

CoefficientSequence build_forcing(const RunConfig& config) { return CoefficientSequence(config.free_coefficient); }

KappaSequence build_kappa(const RunConfig& config) {
    if (!config.kappa) throw InvalidArgument("no kappa sequence configured");
    return KappaSequence(*config.kappa);
}

EquationSpec build_equation(const RunConfig& config) {
    const EquationConfig& eq = config.equation;
    const FeedbackFunction f{eq.f};
    switch (eq.kind) {
        case RecursionKind::Linear: return EquationSpec::linear(build_noise(config), build_forcing(config), eq.x0);
        case RecursionKind::Nonlinear:
            return EquationSpec::nonlinear(f, build_noise(config), build_forcing(config), eq.x0);
        case RecursionKind::Ito:
            return EquationSpec::ito(f, eq.drift, eq.step, build_noise(config), build_forcing(config), eq.x0);
        case RecursionKind::Deterministic:
            if (!eq.a) throw InvalidArgument("deterministic recursion needs the drift sequence a");
            return EquationSpec::deterministic(f, SignedSequence(*eq.a), build_forcing(config), eq.x0);
    }
    throw InvalidArgument("unknown equation kind");
}

}  // namespace sdelab
