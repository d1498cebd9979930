// SPDX-License-Identifier: MIT
#include "cli.hpp"

#include "tucker/algorithms.hpp"
#include "tucker/errors.hpp"
#include "tucker/io.hpp"
#include "tucker/synth.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace tucker::cli {

namespace {

std::string join_dims(const Dims& dims) {
    std::string s;
    for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "x" : "") + std::to_string(dims[i]);
    return s;
}

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

struct SynthArgs {
    Dims dims;
    Dims ranks;
    std::string kind = "lowrank";
    double noise = 0.1;
    std::uint64_t seed = 0;
    std::string out;
};

struct DecomposeArgs {
    std::string input;
    Dims ranks;
    std::string method = "rpcd";
    double step = 1.0;
    double eps = 1e-3;
    std::string eps_inner = "auto";
    int max_iter = 100;
    int max_inner = 50;
    std::string init = "random";
    std::uint64_t seed = 0;
    std::string grad_variant = "literal";
    std::string trace;
    std::string out_dir;
};

struct BenchArgs {
    Dims dims;
    Dims ranks;
    std::vector<std::string> methods;
    std::string kind = "lowrank";
    double noise = 0.1;
    std::uint64_t seed = 0;
    int repeat = 5;
    double eps = 1e-3;
    int max_iter = 100;
    std::string init = "random";
    std::string out;
};

SynthKind parse_kind(const std::string& s) {
    if (s == "lowrank") return SynthKind::lowrank;
    if (s == "noisy") return SynthKind::noisy;
    throw ShapeError("unknown kind '" + s + "'");
}

DecomposeConfig make_config(const DecomposeArgs& a) {
    DecomposeConfig cfg;
    cfg.ranks = a.ranks;
    cfg.method = parse_method(a.method);
    cfg.alpha = a.step;
    cfg.eps = a.eps;
    if (a.eps_inner != "auto") {
        try {
            std::size_t used = 0;
            cfg.eps_inner = std::stod(a.eps_inner, &used);
            if (used != a.eps_inner.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::logic_error&) {
            throw ShapeError("--eps-inner must be 'auto' or a number");
        }
    }
    cfg.max_iter = a.max_iter;
    cfg.max_inner = a.max_inner;
    cfg.init = parse_init(a.init);
    cfg.seed = a.seed;
    if (a.grad_variant == "literal")
        cfg.grad_variant = GradVariant::literal;
    else if (a.grad_variant == "metric")
        cfg.grad_variant = GradVariant::metric;
    else
        throw ShapeError("unknown gradient variant '" + a.grad_variant + "'");
    return cfg;
}

int do_synth(const SynthArgs& a, std::ostream& out) {
    SynthSpec spec{a.dims, a.ranks, parse_kind(a.kind), a.noise, a.seed};
    spec.validate();
    const DenseTensor t = generate(spec);
    io::write_dten(a.out, t);
    out << "norm=" << num(frobenius_norm(t)) << " dims=" << join_dims(t.dims()) << '\n';
    return kSuccess;
}

int do_decompose(const DecomposeArgs& a, std::ostream& out) {
    DecomposeConfig cfg = make_config(a);
    const DenseTensor x = io::read_dten(a.input);
    cfg.validate(x.dims());
    const DecomposeResult res = decompose(x, cfg);
    if (!a.trace.empty()) io::write_trace_csv(a.trace, res.trace.records);
    if (!a.out_dir.empty()) io::write_model(a.out_dir, res.model);
    out << "final_rel_err=" << num(res.trace.final_rel_err) << " iters=" << res.trace.iterations
        << " elapsed_s=" << num(res.trace.elapsed_s) << '\n';
    return kSuccess;
}

int do_info(const std::string& input, std::ostream& out) {
    const DenseTensor t = io::read_dten(input);
    out << "order=" << t.order() << " dims=" << join_dims(t.dims()) << " norm=" << num(frobenius_norm(t))
        << '\n';
    return kSuccess;
}

int do_error(const std::string& input, const std::string& model_dir, std::ostream& out) {
    const DenseTensor x = io::read_dten(input);
    const TuckerModel m = io::read_model(model_dir);
    if (m.shape() != x.dims()) throw ShapeError("model shape does not match the input tensor");
    out << "rel_err=" << num(rel_error_exact(x, m)) << '\n';
    return kSuccess;
}

int do_convert(const std::string& raw, const Dims& dims, const std::string& output, std::ostream& out) {
    const DenseTensor t = io::import_raw(raw, dims);
    io::write_dten(output, t);
    out << "dims=" << join_dims(t.dims()) << '\n';
    return kSuccess;
}

int do_bench(const BenchArgs& a, std::ostream& out) {
    if (a.repeat < 1) throw ShapeError("--repeat must be at least 1");
    const SynthKind kind = parse_kind(a.kind);
    std::vector<Method> methods;
    for (const auto& m : a.methods) methods.push_back(parse_method(m));

    std::vector<double> elapsed(methods.size(), 0.0);
    std::vector<double> errors(methods.size(), 0.0);
    for (int rep = 0; rep < a.repeat; ++rep) {
        const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(rep);
        SynthSpec spec{a.dims, a.ranks, kind, a.noise, seed};
        spec.validate();
        const DenseTensor x = generate(spec);
        for (std::size_t k = 0; k < methods.size(); ++k) {
            DecomposeConfig cfg;
            cfg.ranks = a.ranks;
            cfg.method = methods[k];
            cfg.eps = a.eps;
            cfg.max_iter = a.max_iter;
            cfg.init = parse_init(a.init);
            cfg.seed = seed;
            const DecomposeResult res = decompose(x, cfg);
            elapsed[k] += res.trace.elapsed_s;
            errors[k] += res.trace.final_rel_err;
        }
    }

    std::ofstream csv(a.out, std::ios::trunc);
    if (!csv) throw IoError(IoErrorKind::write, "cannot open " + a.out + " for writing");
    csv << "method,mean_elapsed_s,mean_rel_err,repeats\n";
    for (std::size_t k = 0; k < methods.size(); ++k) {
        const double mean_t = elapsed[k] / a.repeat;
        const double mean_e = errors[k] / a.repeat;
        csv << to_string(methods[k]) << ',' << num(mean_t) << ',' << num(mean_e) << ',' << a.repeat << '\n';
        out << "method=" << to_string(methods[k]) << " mean_elapsed_s=" << num(mean_t)
            << " mean_rel_err=" << num(mean_e) << " repeats=" << a.repeat << '\n';
    }
    if (!csv) throw IoError(IoErrorKind::write, "write failed for " + a.out);
    return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tucker decomposition by Riemannian preconditioned coordinate descent", "tucker"};
    app.require_subcommand(1);

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "generate a synthetic tensor");
    synth->add_option("--dims", sa.dims, "dimensions n1,n2,..")->required()->delimiter(',');
    synth->add_option("--ranks", sa.ranks, "multilinear rank r1,r2,..")->required()->delimiter(',');
    synth->add_option("--kind", sa.kind, "lowrank or noisy")->check(CLI::IsMember({"lowrank", "noisy"}));
    synth->add_option("--noise", sa.noise, "noise level for --kind noisy");
    synth->add_option("--seed", sa.seed, "random seed");
    synth->add_option("-o,--output", sa.out, "output .dten file")->required();

    DecomposeArgs da;
    auto* dec = app.add_subcommand("decompose", "compute a Tucker decomposition");
    dec->add_option("--input", da.input, "input .dten file")->required();
    dec->add_option("--ranks", da.ranks, "multilinear rank r1,r2,..")->required()->delimiter(',');
    dec->add_option("--method", da.method, "rpcd|rpcd-plus|hooi|hosvd|st-hosvd|euclid-cd")
        ->check(CLI::IsMember({"rpcd", "rpcd-plus", "hooi", "hosvd", "st-hosvd", "euclid-cd"}));
    dec->add_option("--step", da.step, "step size");
    dec->add_option("--eps", da.eps, "outer stopping threshold");
    dec->add_option("--eps-inner", da.eps_inner, "RPCD+ inner threshold, or auto (= eps/10)");
    dec->add_option("--max-iter", da.max_iter, "maximum outer iterations");
    dec->add_option("--max-inner", da.max_inner, "maximum RPCD+ inner iterations");
    dec->add_option("--init", da.init, "eye|random|hosvd")->check(CLI::IsMember({"eye", "random", "hosvd"}));
    dec->add_option("--seed", da.seed, "seed for random initialization");
    dec->add_option("--grad-variant", da.grad_variant, "literal|metric")
        ->check(CLI::IsMember({"literal", "metric"}));
    dec->add_option("--trace", da.trace, "write the convergence trace CSV here");
    dec->add_option("--out-dir", da.out_dir, "write the model into this directory");

    std::string info_input;
    auto* info = app.add_subcommand("info", "print tensor dimensions and norm");
    info->add_option("--input", info_input, "input .dten file")->required();

    std::string err_input;
    std::string err_model;
    auto* error = app.add_subcommand("error", "relative error of a stored model");
    error->add_option("--input", err_input, "input .dten file")->required();
    error->add_option("--model", err_model, "model directory")->required();

    std::string raw;
    Dims raw_dims;
    std::string conv_out;
    auto* convert = app.add_subcommand("convert", "wrap raw little-endian doubles as .dten");
    convert->add_option("--raw", raw, "raw input file")->required();
    convert->add_option("--dims", raw_dims, "dimensions n1,n2,..")->required()->delimiter(',');
    convert->add_option("-o,--output", conv_out, "output .dten file")->required();

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "time methods on freshly seeded synthetic tensors");
    bench->add_option("--dims", ba.dims, "dimensions n1,n2,..")->required()->delimiter(',');
    bench->add_option("--ranks", ba.ranks, "multilinear rank r1,r2,..")->required()->delimiter(',');
    bench->add_option("--methods", ba.methods, "comma-separated methods")->required()->delimiter(',');
    bench->add_option("--kind", ba.kind, "lowrank or noisy")->check(CLI::IsMember({"lowrank", "noisy"}));
    bench->add_option("--noise", ba.noise, "noise level for --kind noisy");
    bench->add_option("--seed", ba.seed, "first instance seed");
    bench->add_option("--repeat", ba.repeat, "instances per method");
    bench->add_option("--eps", ba.eps, "outer stopping threshold");
    bench->add_option("--max-iter", ba.max_iter, "maximum outer iterations");
    bench->add_option("--init", ba.init, "eye|random|hosvd")->check(CLI::IsMember({"eye", "random", "hosvd"}));
    bench->add_option("-o,--output", ba.out, "output CSV")->required();

    std::vector<std::string> argv_store{"tucker"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (*synth) return do_synth(sa, out);
        if (*dec) return do_decompose(da, out);
        if (*info) return do_info(info_input, out);
        if (*error) return do_error(err_input, err_model, out);
        if (*convert) return do_convert(raw, raw_dims, conv_out, out);
        if (*bench) return do_bench(ba, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << '\n' << app.help();
        return kUsage;
    } catch (const RankDeficiencyError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}

} // namespace tucker::cli
