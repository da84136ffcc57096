#include "bornlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bornlab/algebra.hpp"
#include "bornlab/artifacts.hpp"
#include "bornlab/hamiltonian.hpp"
#include "bornlab/surrogates.hpp"
#include "bornlab/training.hpp"
#include "bornlab/variance.hpp"

namespace bornlab::cli {

namespace {

using nlohmann::json;

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(err_mu);
                    if (!err) err = std::current_exception();
                    return;
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

// ---------------------------------------------------------------------------
// section builders

struct DataSpec {
    std::string source;
    int n = 0;
    std::vector<double> distribution;
    json resolved;
};

DataSpec build_data(const Config& cfg, bool dry) {
    DataSpec d;
    d.source = cfg.get("data", "source");
    d.resolved["source"] = d.source;
    if (d.source == "tfim") {
        TfimParams p{static_cast<int>(cfg.get_int("data", "n")),
                     cfg.get_double("data", "J"), cfg.get_double("data", "h")};
        d.n = p.n;
        d.resolved["n"] = p.n;
        d.resolved["J"] = p.J;
        d.resolved["h"] = p.h;
        if (!dry) d.distribution = born_distribution(ground_state(build_tfim(p)).state);
    } else if (d.source == "heisenberg_alt") {
        HeisenbergAltParams p{static_cast<int>(cfg.get_int("data", "n")),
                              cfg.get_double("data", "J_even"),
                              cfg.get_double("data", "J_odd")};
        d.n = p.n;
        d.resolved["n"] = p.n;
        d.resolved["J_even"] = p.J_even;
        d.resolved["J_odd"] = p.J_odd;
        if (!dry) d.distribution = born_distribution(ground_state(build_heisenberg_alt(p)).state);
    } else if (d.source == "haldane_1d") {
        Haldane1dParams p{static_cast<int>(cfg.get_int("data", "n")),
                          cfg.get_double("data", "J"), cfg.get_double("data", "h1"),
                          cfg.get_double("data", "h2")};
        d.n = p.n;
        d.resolved["n"] = p.n;
        d.resolved["J"] = p.J;
        d.resolved["h1"] = p.h1;
        d.resolved["h2"] = p.h2;
        if (!dry) d.distribution = born_distribution(ground_state(build_haldane_1d(p)).state);
    } else if (d.source == "haldane_2d") {
        Haldane2dParams p{static_cast<int>(cfg.get_int("data", "nx")),
                          static_cast<int>(cfg.get_int("data", "ny")),
                          cfg.get_double("data", "J"), cfg.get_double("data", "h1"),
                          cfg.get_double("data", "h2")};
        d.n = p.nx * p.ny;
        d.resolved["nx"] = p.nx;
        d.resolved["ny"] = p.ny;
        d.resolved["J"] = p.J;
        d.resolved["h1"] = p.h1;
        d.resolved["h2"] = p.h2;
        const auto adj = haldane_2d_adjacency(p.nx, p.ny);
        json pairs = json::array(), triplets = json::array();
        for (const auto& e : adj.pairs) pairs.push_back({e[0], e[1]});
        for (const auto& t : adj.triplets) triplets.push_back({t[0], t[1], t[2]});
        d.resolved["pairs"] = pairs;
        d.resolved["triplets"] = triplets;
        if (!dry) d.distribution = born_distribution(ground_state(build_haldane_2d(p)).state);
    } else if (d.source == "csv") {
        const std::string path = cfg.get("data", "path");
        std::vector<int> cols;
        if (cfg.has("data", "columns"))
            for (const long c : cfg.get_int_list("data", "columns"))
                cols.push_back(static_cast<int>(c));
        d.resolved["path"] = path;
        d.resolved["columns"] = cols;
        const BinaryDataset ds = load_binary_csv(path, cols);  // also validates in dry runs
        d.n = ds.n;
        d.resolved["n"] = ds.n;
        if (!dry) d.distribution = ds.empirical_distribution();
    } else if (d.source == "iqp_random") {
        // hard-to-learn target: the Born distribution of a random IQP circuit
        const int n = static_cast<int>(cfg.get_int("data", "n"));
        const int pairs = static_cast<int>(cfg.get_int_or("data", "pairs", n - 1));
        const std::uint64_t seed =
            static_cast<std::uint64_t>(cfg.get_int_or("data", "seed", 7));
        d.n = n;
        d.resolved["n"] = n;
        d.resolved["pairs"] = pairs;
        d.resolved["seed"] = seed;
        if (!dry) {
            AnsatzSpec spec;
            spec.kind = AnsatzSpec::Kind::iqp;
            spec.n = n;
            spec.iqp_pairs = pairs;
            spec.seed = seed;
            const Circuit c = build_ansatz(spec);
            Rng rng(seed ^ 0xabcdef);
            std::vector<double> theta(static_cast<std::size_t>(c.param_count));
            for (auto& t : theta) t = rng.uniform(0.0, 6.283185307179586);
            d.distribution = born_distribution(simulate(c, theta));
        }
    } else {
        throw ConfigError("config: unknown data.source '" + d.source + "'");
    }
    return d;
}

struct ModelSpec {
    AnsatzSpec ansatz;
    json resolved;
};

ModelSpec build_model(const Config& cfg, int n, std::uint64_t seed) {
    ModelSpec m;
    const std::string kind = cfg.get("model", "ansatz");
    m.resolved["ansatz"] = kind;
    m.ansatz.n = n;
    m.ansatz.seed = static_cast<std::uint64_t>(
        cfg.get_int_or("model", "seed", static_cast<long>(seed)));
    m.resolved["seed"] = m.ansatz.seed;
    if (kind == "iqp") {
        m.ansatz.kind = AnsatzSpec::Kind::iqp;
        m.ansatz.iqp_pairs = static_cast<int>(cfg.get_int_or("model", "pairs", n - 1));
        m.resolved["pairs"] = m.ansatz.iqp_pairs;
        m.resolved["arity"] = "all singles plus seeded pairs";
    } else if (kind == "matchcircuit") {
        m.ansatz.kind = AnsatzSpec::Kind::matchcircuit;
        m.ansatz.gate_count = static_cast<int>(cfg.get_int("model", "gates"));
        m.resolved["gates"] = m.ansatz.gate_count;
    } else if (kind == "haldane_dla" || kind == "heisenberg_dla") {
        m.ansatz.kind = AnsatzSpec::Kind::dla_sampled;
        m.ansatz.gate_count = static_cast<int>(cfg.get_int("model", "gates"));
        m.ansatz.dla_basis =
            named_dla(kind == "haldane_dla" ? DlaKind::haldane : DlaKind::heisenberg, n).basis;
        m.resolved["gates"] = m.ansatz.gate_count;
    } else if (kind == "strongly_entangling") {
        m.ansatz.kind = AnsatzSpec::Kind::strongly_entangling;
        m.ansatz.layers = static_cast<int>(cfg.get_int("model", "layers"));
        m.resolved["layers"] = m.ansatz.layers;
    } else {
        throw ConfigError("config: unknown model.ansatz '" + kind + "'");
    }
    return m;
}

LossSpec build_loss(const Config& cfg, json& resolved) {
    const std::string kind = cfg.get_or("loss", "kind", "mmd");
    resolved["kind"] = kind;
    if (kind == "sqe") return LossSpec::sqe();
    if (kind == "emd") return LossSpec::emd();
    if (kind == "kl") {
        const double eps = cfg.get_double_or("loss", "epsilon", 1e-12);
        resolved["epsilon"] = eps;
        return LossSpec::kl(eps);
    }
    if (kind != "mmd") throw ConfigError("config: unknown loss.kind '" + kind + "'");
    const std::string kernel = cfg.get_or("loss", "kernel", "gaussian");
    resolved["kernel"] = kernel;
    if (kernel == "gaussian") {
        const double sigma = cfg.get_double_or("loss", "sigma", 1e-3);
        resolved["sigma"] = sigma;
        return LossSpec::mmd(KernelSpec::gaussian(sigma));
    }
    if (kernel == "anova") {
        const int window = static_cast<int>(cfg.get_int("loss", "window"));
        const double gamma = cfg.get_double_or("loss", "gamma", 1.0);
        resolved["window"] = window;
        resolved["gamma"] = gamma;
        return LossSpec::mmd(KernelSpec::anova_substring(window, gamma));
    }
    throw ConfigError("config: unknown loss.kernel '" + kernel + "'");
}

SurrogateChoice build_surrogate(const Config& cfg, json& resolved) {
    const std::string kind = cfg.get_or("surrogate", "kind", "statevector");
    resolved["kind"] = kind;
    if (kind == "statevector") return SurrogateChoice::statevector();
    if (kind == "iqp_pps") {
        const int h = static_cast<int>(cfg.get_int("surrogate", "h_max"));
        resolved["h_max"] = h;
        return SurrogateChoice::iqp_pps(h);
    }
    if (kind == "pauli_prop") {
        const int w = static_cast<int>(cfg.get_int("surrogate", "w_max"));
        resolved["w_max"] = w;
        return SurrogateChoice::pauli_prop(w);
    }
    throw ConfigError("config: unknown surrogate.kind '" + kind + "'");
}

TrainConfig build_train(const Config& cfg, json& resolved) {
    TrainConfig t;
    t.iterations = static_cast<int>(cfg.get_int_or("train", "iterations", 100));
    t.learning_rate = cfg.get_double_or("train", "learning_rate", 0.05);
    const std::string opt = cfg.get_or("train", "optimizer", "adam");
    if (opt == "adam") t.optimizer = TrainConfig::Optimizer::adam;
    else if (opt == "sgd") t.optimizer = TrainConfig::Optimizer::sgd;
    else throw ConfigError("config: unknown train.optimizer '" + opt + "'");
    const std::string grad = cfg.get_or("train", "gradient", "parameter_shift");
    if (grad == "parameter_shift") t.gradient = TrainConfig::Gradient::parameter_shift;
    else if (grad == "finite_difference") t.gradient = TrainConfig::Gradient::finite_difference;
    else throw ConfigError("config: unknown train.gradient '" + grad + "'");
    t.fd_step = cfg.get_double_or("train", "fd_step", 1e-4);
    const std::string init = cfg.get_or("train", "init", "random");
    if (init == "random") t.init = TrainConfig::Init::random_uniform;
    else if (init == "data_driven") t.init = TrainConfig::Init::data_driven;
    else throw ConfigError("config: unknown train.init '" + init + "'");
    if (cfg.has("train", "batch")) {
        t.batch = static_cast<int>(cfg.get_int("train", "batch"));
        resolved["batch"] = *t.batch;
    }
    resolved["iterations"] = t.iterations;
    resolved["learning_rate"] = t.learning_rate;
    resolved["optimizer"] = opt;
    resolved["gradient"] = grad;
    resolved["fd_step"] = t.fd_step;
    resolved["init"] = init;
    return t;
}

// the k (or D) grid of the truncation section
std::vector<int> truncation_grid(const Config& cfg, json& resolved) {
    const std::string kind = cfg.get_or("truncation", "kind", "k_order");
    resolved["kind"] = kind;
    if (kind == "k_order") {
        std::vector<int> ks;
        for (const long k : cfg.get_int_list("truncation", "k")) ks.push_back(static_cast<int>(k));
        resolved["k"] = ks;
        return ks;
    }
    if (kind == "rfc") {
        std::vector<int> ds;
        for (const long d : cfg.get_int_list("truncation", "D")) ds.push_back(static_cast<int>(d));
        resolved["D"] = ds;
        const std::string pol = cfg.get_or("truncation", "policy", "uniform_up_to");
        resolved["policy"] = pol;
        if (pol == "uniform_up_to") {
            if (cfg.has("truncation", "k_max"))
                resolved["k_max"] = cfg.get_int("truncation", "k_max");
        } else if (pol == "bernoulli") {
            resolved["prob"] = cfg.get_double_or("truncation", "prob", 0.5);
        } else {
            throw ConfigError("config: unknown truncation.policy '" + pol + "'");
        }
        return ds;
    }
    if (kind == "full") return {-1};
    throw ConfigError("config: unknown truncation.kind '" + kind + "'");
}

// resolved once up front: task fan-out must not touch the config concurrently
struct TruncationFactory {
    enum class Kind { full, k_order, rfc } kind = Kind::k_order;
    RfcPolicy policy;

    TruncationSpec make(int grid_value, std::uint64_t seed) const {
        switch (kind) {
            case Kind::full: return TruncationSpec::full();
            case Kind::k_order: return TruncationSpec::k_order(grid_value);
            case Kind::rfc:
                return rfc_sample(policy_n, policy, static_cast<std::size_t>(grid_value), seed);
        }
        throw std::logic_error("TruncationFactory: unknown kind");
    }
    int policy_n = 0;
};

TruncationFactory make_truncation_factory(const Config& cfg, int n) {
    TruncationFactory f;
    f.policy_n = n;
    const std::string kind = cfg.get_or("truncation", "kind", "k_order");
    if (kind == "k_order") {
        f.kind = TruncationFactory::Kind::k_order;
    } else if (kind == "full") {
        f.kind = TruncationFactory::Kind::full;
    } else if (kind == "rfc") {
        f.kind = TruncationFactory::Kind::rfc;
        const std::string pol = cfg.get_or("truncation", "policy", "uniform_up_to");
        if (pol == "uniform_up_to") {
            f.policy.kind = RfcPolicy::Kind::uniform_up_to;
            f.policy.k_max = static_cast<int>(cfg.get_int_or("truncation", "k_max", n));
        } else {
            f.policy.kind = RfcPolicy::Kind::bernoulli;
            f.policy.prob = cfg.get_double_or("truncation", "prob", 0.5);
        }
    } else {
        throw ConfigError("config: unknown truncation.kind '" + kind + "'");
    }
    return f;
}

// ---------------------------------------------------------------------------

struct Runner {
    Runner(const Config& c, RunOptions o, bool d) : cfg(c), opts(std::move(o)), dry(d) {}

    const Config& cfg;
    RunOptions opts;
    bool dry = false;
    std::string kind;
    std::uint64_t seed = 0;
    std::filesystem::path out;
    json resolved;
    std::vector<std::string> artifacts;

    std::string path(const std::string& name) {
        artifacts.push_back(name);
        return (out / name).string();
    }

    void write_metadata() {
        json meta;
        meta["experiment"] = kind;
        meta["seed"] = seed;
        char hex[32];
        std::snprintf(hex, sizeof hex, "%016llx",
                      static_cast<unsigned long long>(cfg.content_hash()));
        meta["config_hash"] = hex;
        meta["config_text"] = cfg.canonical_text();
        meta["resolved"] = resolved;
        std::sort(artifacts.begin(), artifacts.end());
        meta["artifacts"] = artifacts;
        std::ofstream f(out / "metadata.json", std::ios::binary);
        f << meta.dump(2) << "\n";
    }
};

std::string fmt_int(long v) { return std::to_string(v); }

// ---------------------------------------------------------------------------
// experiment: spectrum

void run_spectrum(Runner& r) {
    DataSpec data = build_data(r.cfg, r.dry);
    r.resolved["data"] = data.resolved;
    r.cfg.check_all_consumed();
    if (r.dry) return;

    const CorrelatorVector c = decompose(data.distribution, data.n);
    std::vector<std::pair<SubsetIndex, double>> rows(c.entries.begin(), c.entries.end());
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return std::make_pair(subset_order(a.first), a.first) <
               std::make_pair(subset_order(b.first), b.first);
    });
    CsvWriter csv(r.path("correlations.csv"), {"order", "subset_mask", "value"});
    for (const auto& [s, v] : rows)
        csv.row({fmt_int(subset_order(s)), fmt_int(static_cast<long>(s)),
                 format_double(std::abs(v))});
    csv.close();

    CsvWriter dist(r.path("distribution.csv"), {"bitstring", "probability"});
    for (std::size_t x = 0; x < data.distribution.size(); ++x) {
        std::string bits(static_cast<std::size_t>(data.n), '0');
        for (int q = 0; q < data.n; ++q)
            if ((x >> (data.n - 1 - q)) & 1) bits[static_cast<std::size_t>(q)] = '1';
        dist.row({bits, format_double(data.distribution[x])});
    }
    dist.close();
    if (r.opts.svg) {
        std::vector<std::vector<double>> xs, ys;
        for (int order = 0; order <= data.n; ++order) {
            xs.emplace_back();
            ys.emplace_back();
            for (const auto& [s, v] : rows)
                if (subset_order(s) == order) {
                    xs.back().push_back(order);
                    ys.back().push_back(std::abs(v));
                }
        }
        write_svg_lines((r.out / "correlations.svg").string(), xs, ys,
                        "correlation spectrum");
        r.artifacts.push_back("correlations.svg");
    }
}

// ---------------------------------------------------------------------------
// experiment: dla_check

void run_dla_check(Runner& r) {
    const int n_min = static_cast<int>(r.cfg.get_int("dla", "n_min"));
    const int n_max = static_cast<int>(r.cfg.get_int("dla", "n_max"));
    const std::string kinds = r.cfg.get_or("dla", "kinds", "matchgate,heisenberg,haldane");
    const long max_dim = r.cfg.get_int_or("dla", "max_dim", 1 << 20);
    r.resolved["n_min"] = n_min;
    r.resolved["n_max"] = n_max;
    r.resolved["kinds"] = kinds;
    if (n_min < 2 || n_max < n_min || n_max > 8)
        throw ConfigError("config: dla n range must satisfy 2 <= n_min <= n_max <= 8");
    r.cfg.check_all_consumed();
    if (r.dry) return;

    std::vector<std::string> kind_list;
    {
        std::stringstream ss(kinds);
        std::string item;
        while (std::getline(ss, item, ',')) kind_list.push_back(item);
    }
    CsvWriter csv(r.path("dla.csv"),
                  {"kind", "n", "dim_named", "dim_closure", "closure_equals_named"});
    for (const auto& kname : kind_list) {
        DlaKind kind;
        if (kname == "matchgate") kind = DlaKind::matchgate;
        else if (kname == "heisenberg") kind = DlaKind::heisenberg;
        else if (kname == "haldane") kind = DlaKind::haldane;
        else throw ConfigError("config: unknown dla kind '" + kname + "'");
        for (int n = std::max(n_min, kind == DlaKind::haldane ? 3 : 2); n <= n_max; ++n) {
            const OperatorAlgebra named = named_dla(kind, n);
            std::vector<PauliString> gens;
            if (kind == DlaKind::matchgate) gens = matchgate_generators(n);
            else if (kind == DlaKind::heisenberg) gens = heisenberg_generator_words(n);
            else gens = haldane_generator_words(n);
            const OperatorAlgebra closure =
                lie_closure(gens, static_cast<std::size_t>(max_dim));
            bool equal = closure.dimension() == named.dimension();
            if (equal)
                for (const auto& p : named.basis)
                    if (!closure.contains(p)) { equal = false; break; }
            csv.row({kname, fmt_int(n), fmt_int(static_cast<long>(named.dimension())),
                     fmt_int(static_cast<long>(closure.dimension())),
                     equal ? "1" : "0"});
        }
    }
    csv.close();

    CsvWriter inter(r.path("intersection.csv"),
                    {"n", "haldane_dim", "heisenberg_dim", "intersection_size"});
    for (int n = std::max(3, n_min); n <= n_max; ++n) {
        const OperatorAlgebra ha = named_dla(DlaKind::haldane, n);
        const OperatorAlgebra he = named_dla(DlaKind::heisenberg, n);
        const OperatorAlgebra both = algebra_intersection(ha, he);
        inter.row({fmt_int(n), fmt_int(static_cast<long>(ha.dimension())),
                   fmt_int(static_cast<long>(he.dimension())),
                   fmt_int(static_cast<long>(both.dimension()))});
    }
    inter.close();
}

// ---------------------------------------------------------------------------
// experiment: variance_grid

void run_variance_grid(Runner& r) {
    const std::string family = r.cfg.get("variance", "family");
    const int n = static_cast<int>(r.cfg.get_int("variance", "n"));
    std::vector<int> orders;
    for (const long k : r.cfg.get_int_list("variance", "orders"))
        orders.push_back(static_cast<int>(k));
    const std::size_t draws =
        static_cast<std::size_t>(r.cfg.get_int_or("variance", "draws", 20000));
    r.resolved["family"] = family;
    r.resolved["n"] = n;
    r.resolved["orders"] = orders;
    r.resolved["draws"] = draws;

    int g = 0;
    if (family == "matchgate") {
        // 40 gates echo the training ansatz; the variance oracle needs the
        // circuit family mixed to the algebra's invariant measure
        g = static_cast<int>(r.cfg.get_int_or("variance", "gates", 100 * n));
        r.resolved["gates"] = g;
    } else if (family != "haar" && family != "scrambling") {
        throw ConfigError("config: unknown variance.family '" + family + "'");
    }
    r.cfg.check_all_consumed();
    if (r.dry) return;

    struct Row {
        int order;
        double closed, mc, se;
    };
    std::vector<Row> corr_rows(orders.size()), trunc_rows(orders.size());
    const Rng master(r.seed);

    if (family == "matchgate") {
        parallel_for(orders.size(), r.opts.threads, [&](std::size_t i) {
            const int k = orders[i];
            Rng rk = master.split(2 * i);
            const SubsetIndex subset = (1ULL << k) - 1;
            const auto rep = mc_variance(
                [&](Rng& rng) {
                    return z_correlator(draw_matchcircuit_state(n, g, rng), subset);
                },
                draws, rk.next_u64(), matchgate_correlator_variance(n, k));
            corr_rows[i] = {k, rep.closed_form, rep.monte_carlo.mean,
                            rep.monte_carlo.std_error};
            Rng rt = master.split(2 * i + 1);
            const auto rep2 = mc_variance(
                [&](Rng& rng) {
                    const auto probs = born_distribution(draw_matchcircuit_state(n, g, rng));
                    const CorrelatorVector c = decompose(probs, n);
                    double tot = 0.0;
                    for (const auto& [s, v] : c.entries)
                        if (subset_order(s) <= k) tot += v;
                    return tot / static_cast<double>(std::size_t{1} << n);
                },
                draws, rt.next_u64(), matchgate_truncated_variance(n, k));
            trunc_rows[i] = {k, rep2.closed_form, rep2.monte_carlo.mean,
                             rep2.monte_carlo.std_error};
        });
        CsvWriter c1(r.path("variance_correlator.csv"),
                     {"n", "order", "chi_or_blank", "closed_form", "mc_mean", "mc_stderr"});
        for (const auto& row : corr_rows)
            c1.row({fmt_int(n), fmt_int(row.order), "", format_double(row.closed),
                    format_double(row.mc), format_double(row.se)});
        c1.close();
        CsvWriter c2(r.path("variance_truncated.csv"),
                     {"n", "order", "chi_or_blank", "closed_form", "mc_mean", "mc_stderr"});
        for (const auto& row : trunc_rows)
            c2.row({fmt_int(n), fmt_int(row.order), "", format_double(row.closed),
                    format_double(row.mc), format_double(row.se)});
        c2.close();
        return;
    }
    if (family == "haar") {
        parallel_for(orders.size(), r.opts.threads, [&](std::size_t i) {
            const int k = orders[i];
            Rng rk = master.split(i);
            const auto err = haar_truncation_error(n, k);
            // E[D_k^2] is a mean, not a variance: accumulate directly
            Rng rng(rk.next_u64());
            double sum = 0.0, sumsq = 0.0;
            for (std::size_t d = 0; d < draws; ++d) {
                const auto probs = born_distribution(haar_state(n, rng));
                const CorrelatorVector c = decompose(probs, n);
                double pk = 0.0;
                for (const auto& [s, v] : c.entries)
                    if (subset_order(s) <= k) pk += v;
                pk /= static_cast<double>(std::size_t{1} << n);
                const double dk = probs[0] - pk;
                sum += dk * dk;
                sumsq += dk * dk * dk * dk;
            }
            const double mean = sum / static_cast<double>(draws);
            const double var = sumsq / static_cast<double>(draws) - mean * mean;
            corr_rows[i] = {k, err.haar_mean_sq, mean,
                            std::sqrt(std::max(var, 0.0) / static_cast<double>(draws))};
        });
        CsvWriter c1(r.path("variance.csv"),
                     {"n", "order", "chi_or_blank", "closed_form", "mc_mean", "mc_stderr"});
        for (const auto& row : corr_rows)
            c1.row({fmt_int(n), fmt_int(row.order), "", format_double(row.closed),
                    format_double(row.mc), format_double(row.se)});
        c1.close();
        return;
    }
    // scrambling
    parallel_for(orders.size(), r.opts.threads, [&](std::size_t i) {
        const int k = orders[i];
        Rng rk = master.split(i);
        const auto chk = scrambling_bound_check(n, (1ULL << k) - 1, draws, rk.next_u64());
        corr_rows[i] = {k, chk.bound, chk.empirical_var, 0.0};
    });
    CsvWriter c1(r.path("variance.csv"),
                 {"n", "order", "chi_or_blank", "closed_form", "mc_mean", "mc_stderr"});
    for (const auto& row : corr_rows)
        c1.row({fmt_int(n), fmt_int(row.order), "", format_double(row.closed),
                format_double(row.mc), format_double(row.se)});
    c1.close();
}

// ---------------------------------------------------------------------------
// experiment: rmps_grid

void run_rmps_grid(Runner& r) {
    const std::string quantity = r.cfg.get("rmps", "quantity");
    const int n = static_cast<int>(r.cfg.get_int("rmps", "n"));
    std::vector<int> orders;
    for (const long k : r.cfg.get_int_list("rmps", "orders"))
        orders.push_back(static_cast<int>(k));
    std::vector<int> chis;
    for (const long c : r.cfg.get_int_list("rmps", "chi")) chis.push_back(static_cast<int>(c));
    const std::size_t mc_draws =
        static_cast<std::size_t>(r.cfg.get_int_or("rmps", "mc_draws", 0));
    r.resolved["quantity"] = quantity;
    r.resolved["n"] = n;
    r.resolved["orders"] = orders;
    r.resolved["chi"] = chis;
    r.resolved["mc_draws"] = mc_draws;
    if (quantity != "correlator" && quantity != "marginal" && quantity != "truncated_prob" &&
        quantity != "renyi2")
        throw ConfigError("config: unknown rmps.quantity '" + quantity + "'");
    if (mc_draws > 0 && n > 10)
        throw ConfigError("config: rmps Monte Carlo capped at n <= 10");
    r.cfg.check_all_consumed();
    if (r.dry) return;

    struct Row {
        int order, chi;
        double closed;
        bool has_mc = false;
        double mc = 0.0, se = 0.0;
    };
    std::vector<Row> rows(orders.size() * chis.size());
    const Rng master(r.seed);
    parallel_for(rows.size(), r.opts.threads, [&](std::size_t i) {
        const int order = orders[i / chis.size()];
        const int chi = chis[i % chis.size()];
        RmpsParams params{2, chi, n};
        Row row;
        row.order = order;
        row.chi = chi;
        const SubsetIndex subset = (1ULL << order) - 1;
        if (quantity == "correlator") row.closed = rmps_correlator_variance(params, subset);
        else if (quantity == "marginal") row.closed = rmps_marginal_variance(params, order);
        else if (quantity == "truncated_prob")
            row.closed = rmps_truncated_prob_variance(params, order);
        else row.closed = rmps_renyi2_max(params, order);
        if (mc_draws > 0) {
            Rng rk = master.split(i);
            row.has_mc = true;
            const std::uint64_t s = rk.next_u64();
            if (quantity == "correlator")
                row.mc = rmps_mc_correlator_variance(params, subset, mc_draws, s, &row.se);
            else if (quantity == "marginal")
                row.mc = rmps_mc_marginal_variance(params, order, mc_draws, s, &row.se);
            else if (quantity == "truncated_prob")
                row.mc = rmps_mc_truncated_prob_variance(params, order, mc_draws, s, &row.se);
            else row.mc = rmps_mc_renyi2_max(params, order, mc_draws, s, &row.se);
        }
        rows[i] = row;
    });
    CsvWriter csv(r.path("variance.csv"),
                  {"n", "order", "chi_or_blank", "closed_form", "mc_mean", "mc_stderr"});
    for (const auto& row : rows)
        csv.row({fmt_int(n), fmt_int(row.order), fmt_int(row.chi),
                 format_double(row.closed),
                 row.has_mc ? format_double(row.mc) : std::string(),
                 row.has_mc ? format_double(row.se) : std::string()});
    csv.close();
}

// ---------------------------------------------------------------------------
// experiment: train_deploy

void run_train_deploy(Runner& r) {
    DataSpec data = build_data(r.cfg, r.dry);
    r.resolved["data"] = data.resolved;
    ModelSpec model = build_model(r.cfg, data.n, r.seed);
    r.resolved["model"] = model.resolved;
    json loss_resolved;
    const LossSpec loss = build_loss(r.cfg, loss_resolved);
    r.resolved["loss"] = loss_resolved;
    json train_resolved;
    TrainConfig base = build_train(r.cfg, train_resolved);
    json surr_resolved;
    base.surrogate = build_surrogate(r.cfg, surr_resolved);
    r.resolved["surrogate"] = surr_resolved;
    json trunc_resolved;
    const std::vector<int> grid = truncation_grid(r.cfg, trunc_resolved);
    const TruncationFactory trunc_factory = make_truncation_factory(r.cfg, data.n);
    r.resolved["truncation"] = trunc_resolved;
    const int seeds = static_cast<int>(r.cfg.get_int_or("train", "seeds", 1));
    train_resolved["seeds"] = seeds;
    r.resolved["train"] = train_resolved;
    r.cfg.check_all_consumed();
    if (r.dry) return;

    const Circuit circuit = build_ansatz(model.ansatz);
    const Rng master(r.seed);

    struct Task {
        int grid_value, seed_idx;
        TrainResult result;
        double kl_final = 0.0, kl_initial = 0.0;
    };
    std::vector<Task> tasks;
    for (const int gv : grid)
        for (int s = 0; s < seeds; ++s) tasks.push_back({gv, s, {}, 0.0, 0.0});

    parallel_for(tasks.size(), r.opts.threads, [&](std::size_t i) {
        Task& t = tasks[i];
        TrainConfig tc = base;
        Rng rt = master.split(static_cast<std::size_t>(t.grid_value) * 1000 +
                              static_cast<std::size_t>(t.seed_idx));
        tc.seed = rt.next_u64();
        tc.truncation = trunc_factory.make(t.grid_value, tc.seed ^ 0x5eed);
        t.result = train(circuit, data.distribution, loss, tc);
        t.kl_final = deploy_evaluate(circuit, t.result.theta_star, data.distribution);
        // replay the initialization draw for the untrained baseline
        Rng init_rng(tc.seed);
        std::vector<double> theta0(static_cast<std::size_t>(circuit.param_count));
        if (tc.init == TrainConfig::Init::random_uniform)
            for (auto& v : theta0) v = init_rng.uniform(0.0, 6.283185307179586476925286766559);
        else theta0 = init_from_data(circuit, data.distribution);
        t.kl_initial = deploy_evaluate(circuit, theta0, data.distribution);
    });

    CsvWriter kl(r.path("deployed_kl.csv"), {"k_or_D", "seed", "kl"});
    CsvWriter kl0(r.path("deployed_kl_initial.csv"), {"k_or_D", "seed", "kl"});
    for (const auto& t : tasks) {
        kl.row({fmt_int(t.grid_value), fmt_int(t.seed_idx), format_double(t.kl_final)});
        kl0.row({fmt_int(t.grid_value), fmt_int(t.seed_idx), format_double(t.kl_initial)});
        const std::string name = "loss_history_k" + std::to_string(t.grid_value) + "_seed" +
                                 std::to_string(t.seed_idx) + ".csv";
        CsvWriter lh(r.path(name), {"iteration", "loss"});
        for (std::size_t i = 0; i < t.result.loss_history.size(); ++i)
            lh.row({fmt_int(static_cast<long>(i)), format_double(t.result.loss_history[i])});
        lh.close();
    }
    kl.close();
    kl0.close();
    if (r.opts.svg) {
        std::vector<std::vector<double>> xs, ys;
        for (const auto& t : tasks) {
            if (t.seed_idx != 0) continue;
            xs.emplace_back();
            ys.emplace_back();
            for (std::size_t i = 0; i < t.result.loss_history.size(); ++i) {
                xs.back().push_back(static_cast<double>(i));
                ys.back().push_back(t.result.loss_history[i]);
            }
        }
        write_svg_lines((r.out / "loss_history.svg").string(), xs, ys,
                        "training loss per truncation");
        r.artifacts.push_back("loss_history.svg");
    }
}

// ---------------------------------------------------------------------------
// experiment: pps_bench

void run_pps_bench(Runner& r) {
    const int n = static_cast<int>(r.cfg.get_int("pps", "n"));
    const int pairs = static_cast<int>(r.cfg.get_int_or("pps", "pairs", n));
    std::vector<int> ks, hs;
    for (const long k : r.cfg.get_int_list("pps", "k")) ks.push_back(static_cast<int>(k));
    for (const long h : r.cfg.get_int_list("pps", "h")) hs.push_back(static_cast<int>(h));
    const int reps = static_cast<int>(r.cfg.get_int_or("pps", "repetitions", 5));
    const int iterations = static_cast<int>(r.cfg.get_int_or("pps", "iterations", 20));
    const double lr = r.cfg.get_double_or("pps", "learning_rate", 0.1);
    r.resolved["n"] = n;
    r.resolved["pairs"] = pairs;
    r.resolved["k"] = ks;
    r.resolved["h"] = hs;
    r.resolved["repetitions"] = reps;
    r.resolved["iterations"] = iterations;
    r.resolved["learning_rate"] = lr;
    if (n < 2 || n > 10) throw ConfigError("config: pps bench needs 2 <= n <= 10");
    r.cfg.check_all_consumed();
    if (r.dry) return;

    const Rng master(r.seed);
    struct Cell {
        int k, h;
        double mse = 0.0;
    };
    std::vector<Cell> cells;
    for (const int k : ks)
        for (const int h : hs) cells.push_back({k, h, 0.0});

    parallel_for(cells.size(), r.opts.threads, [&](std::size_t ci) {
        Cell& cell = cells[ci];
        double acc = 0.0;
        for (int rep = 0; rep < reps; ++rep) {
            // instances are paired across the (k, h) grid so the MSE sweep
            // compares budgets on identical targets
            Rng inst = master.split(static_cast<std::size_t>(rep));
            AnsatzSpec spec;
            spec.kind = AnsatzSpec::Kind::iqp;
            spec.n = n;
            spec.iqp_pairs = pairs;
            spec.seed = inst.next_u64();
            const Circuit circuit = build_ansatz(spec);
            // target: the same circuit family at hidden random angles
            std::vector<double> hidden(static_cast<std::size_t>(circuit.param_count));
            for (auto& v : hidden) v = inst.uniform(0.0, 6.283185307179586476925286766559);
            const auto target = born_distribution(simulate(circuit, hidden));

            Rng rr = master.split(1000000 + ci * 1000 + static_cast<std::size_t>(rep));
            TrainConfig tc;
            tc.iterations = iterations;
            tc.learning_rate = lr;
            tc.truncation = TruncationSpec::k_order(cell.k);
            tc.surrogate = SurrogateChoice::iqp_pps(cell.h);
            tc.seed = rr.next_u64();
            const TrainResult res =
                train(circuit, target, LossSpec::mmd(KernelSpec::gaussian(1e-3)), tc);

            const CorrelatorVector exact = decompose(target, n);
            acc += mse_k(exact, res.final_correlators, cell.k);
        }
        cell.mse = acc / static_cast<double>(reps);
    });
    CsvWriter csv(r.path("mse.csv"), {"order", "h_or_chi", "value"});
    for (const auto& cell : cells)
        csv.row({fmt_int(cell.k), fmt_int(cell.h), format_double(cell.mse)});
    csv.close();
}

// ---------------------------------------------------------------------------
// experiment: discrepancy

void run_discrepancy(Runner& r) {
    DataSpec data = build_data(r.cfg, r.dry);
    r.resolved["data"] = data.resolved;
    ModelSpec model = build_model(r.cfg, data.n, r.seed);
    r.resolved["model"] = model.resolved;
    json loss_resolved;
    const LossSpec loss = build_loss(r.cfg, loss_resolved);
    r.resolved["loss"] = loss_resolved;
    json train_resolved;
    TrainConfig base = build_train(r.cfg, train_resolved);
    r.resolved["train"] = train_resolved;
    json surr_resolved;
    SurrogateChoice cl_surrogate = build_surrogate(r.cfg, surr_resolved);
    r.resolved["surrogate"] = surr_resolved;
    const int k = static_cast<int>(r.cfg.get_int_or("truncation", "k", 2));
    r.resolved["truncation"] = {{"kind", "k_order"}, {"k", k}};
    r.cfg.check_all_consumed();
    if (r.dry) return;

    const Circuit circuit = build_ansatz(model.ansatz);
    const Rng master(r.seed);

    TrainConfig classical = base;
    classical.truncation = TruncationSpec::k_order(k);
    classical.surrogate = cl_surrogate;
    classical.seed = master.split(1).next_u64();
    const TrainResult cl = train(circuit, data.distribution, loss, classical);

    TrainConfig quantum = base;
    quantum.truncation = TruncationSpec::full();
    quantum.surrogate = SurrogateChoice::statevector();
    quantum.seed = master.split(2).next_u64();
    const TrainResult qu = train(circuit, data.distribution, loss, quantum);

    const DiscrepancyReport rep = discrepancy_report(circuit, data.distribution, cl, qu);
    json out;
    out["risk_classical"] = rep.risk_classical;
    out["risk_quantum_deployed"] = rep.risk_quantum_deployed;
    out["norm_feature_gap"] = rep.norm_feature_gap;
    out["norm_surrogate_mismatch"] = rep.norm_surrogate_mismatch;
    out["constant_C"] = rep.constant_C;
    out["bound_satisfied"] = rep.bound_satisfied;
    out["alignment_c_max"] = rep.alignment_c_max;
    out["alignment_deviation"] = rep.alignment_deviation;
    std::ofstream f(r.out / "report.json", std::ios::binary);
    f << out.dump(2) << "\n";
    r.artifacts.push_back("report.json");
}

void dispatch(Runner& r) {
    r.kind = r.cfg.get("experiment", "kind");
    r.seed = static_cast<std::uint64_t>(r.cfg.get_int_or("experiment", "seed", 0));
    std::string out_dir = r.opts.out_dir.empty()
                              ? r.cfg.get_or("experiment", "out", "results")
                              : r.opts.out_dir;
    r.out = out_dir;
    if (!r.dry) std::filesystem::create_directories(r.out);

    if (r.kind == "spectrum") run_spectrum(r);
    else if (r.kind == "dla_check") run_dla_check(r);
    else if (r.kind == "variance_grid") run_variance_grid(r);
    else if (r.kind == "rmps_grid") run_rmps_grid(r);
    else if (r.kind == "train_deploy") run_train_deploy(r);
    else if (r.kind == "pps_bench") run_pps_bench(r);
    else if (r.kind == "discrepancy") run_discrepancy(r);
    else throw ConfigError("config: unknown experiment.kind '" + r.kind + "'");
    if (!r.dry) r.write_metadata();
}

}  // namespace

void validate_experiment(const Config& cfg) {
    Runner r(cfg, RunOptions{}, true);
    dispatch(r);
}

void run_experiment(const Config& cfg, const RunOptions& opts) {
    {
        // full validation pass first so config problems exit before compute
        Runner dry(cfg, RunOptions{}, true);
        dispatch(dry);
    }
    Runner r(cfg, opts, false);
    dispatch(r);
}

}  // namespace bornlab::cli
