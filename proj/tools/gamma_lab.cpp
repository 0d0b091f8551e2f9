// gamma_lab: command-line front end. Exit 0 when every check passes, 1 when a
// check fails (the report is still printed), 2 on malformed input or flags.

#include <algorithm>
#include <functional>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "gammalab/dilation.hpp"
#include "gammalab/fundamental.hpp"
#include "gammalab/generators.hpp"
#include "gammalab/hardy.hpp"
#include "gammalab/io.hpp"
#include "gammalab/mu.hpp"

using namespace gammalab;
using nlohmann::json;

namespace {

struct Options {
    double tol = 1e-8;
    bool json = false;
    std::uint64_t seed = 7;
};

struct Outcome {
    Report report;
    json payload = json::object();
    std::vector<std::string> summary;  // extra lines for text output
};

json vectorToJson(const Vec& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back({v(k).real(), v(k).imag()});
    return out;
}

std::string formatVec(const Vec& v) {
    std::ostringstream os;
    os.precision(10);
    os << '(';
    for (Eigen::Index k = 0; k < v.size(); ++k) os << (k ? ", " : "") << v(k);
    os << ')';
    return os.str();
}

TupleVariant symbolVariantCheck(const SymbolFamily& a, const SymbolFamily& b) {
    if (a.variant != b.variant) throw Error(ErrorKind::InvalidInput, "symbol files disagree on the variant");
    return a.variant;
}

int emit(const Options& opt, Outcome& out) {
    if (opt.json) {
        json j = out.payload;
        j["report"] = reportToJson(out.report);
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& line : out.summary) std::cout << line << '\n';
        std::cout << reportText(out.report);
    }
    return out.report.pass() ? 0 : 1;
}

int exitCodeFor(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::ShapeMismatch:
    case ErrorKind::MissingWitness:
    case ErrorKind::DegreeTooLarge:
    case ErrorKind::InsufficientCoefficients:
        return 2;
    default:
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structured singular value domains and commuting contraction tuples"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--tol", opt.tol, "verification tolerance")->check(CLI::PositiveNumber);
    app.add_flag("--json", opt.json, "machine-readable output");
    app.add_option("--seed", opt.seed, "seed for randomised checks and generators");

    std::function<Outcome()> run;

    // mu
    std::string structure, matrixPath;
    int grid = 256, iters = 64;
    auto* mu = app.add_subcommand("mu", "bracket the structured singular value");
    mu->add_option("--structure", structure, "n;s;r1,..,rs")->required();
    mu->add_option("--matrix", matrixPath)->required();
    mu->add_option("--grid", grid)->check(CLI::PositiveNumber);
    mu->add_option("--iters", iters)->check(CLI::PositiveNumber);
    mu->callback([&] {
        run = [&] {
            const auto st = BlockStructure::parse(structure);
            const Mat a = matrixFromJson(readJson(matrixPath));
            const auto lo = muLower(a, st, grid);
            const auto up = muUpper(a, st, iters);
            Outcome out;
            out.report.command = "mu";
            out.report.add("bracket ordering", "lower <= upper", std::max(0.0, lo.value - up.value), opt.tol * std::max(1.0, up.value));
            const double upper = std::max(lo.value, up.value);
            out.payload = {{"lower", lo.value}, {"upper", upper}, {"gap", upper - lo.value}, {"phaseWitness", vectorToJson(lo.phaseWitness)}};
            json blocks = json::array();
            for (const auto& b : up.scalingBlocks) blocks.push_back(matrixToJson(b));
            out.payload["scalingBlocks"] = blocks;
            out.summary.push_back("structure " + st.str());
            out.summary.push_back("lower " + std::to_string(lo.value) + "  upper " + std::to_string(upper));
            return out;
        };
    });

    // symmetrize
    std::string variantText;
    auto* sym = app.add_subcommand("symmetrize", "coordinates of the symmetrization map");
    sym->add_option("--variant", variantText, "3311|3212|2211")->required();
    sym->add_option("--matrix", matrixPath)->required();
    sym->callback([&] {
        run = [&] {
            const GammaVariant v = parseVariant(variantText);
            const Mat a = matrixFromJson(readJson(matrixPath));
            const GammaPoint p = symmetrize(v, a);
            const BlockStructure st = v == GammaVariant::E3311 ? BlockStructure::E3311()
                                      : v == GammaVariant::E3212 ? BlockStructure::E3212()
                                                                 : BlockStructure::E2211();
            const double upper = muUpper(a, st).value;
            Outcome out;
            out.report.command = "symmetrize";
            out.report.notes.push_back("mu upper bound of the witness: " + std::to_string(upper) +
                                       (upper <= 1 + opt.tol ? " (point in the closed domain)" : " (membership not certified)"));
            out.payload = {{"variant", std::string(to_string(v))}, {"coords", vectorToJson(p.coords)}, {"witnessMuUpper", upper}};
            out.summary.push_back("coords " + formatVec(p.coords));
            return out;
        };
    });

    // verify
    std::string tuplePath;
    std::optional<long> certified;
    bool contractionOnly = false;
    auto* verify = app.add_subcommand("verify", "isometry relations or contraction gates of a tuple");
    verify->add_option("--tuple", tuplePath)->required();
    verify->add_option("--certified", certified, "check isometry identities on the first columns only");
    verify->add_flag("--contraction", contractionOnly, "check commutation and norm gates only");
    verify->callback([&] {
        run = [&] {
            const PairedFamily f = tupleFromJson(readJson(tuplePath));
            Outcome out;
            if (contractionOnly) {
                out.report.command = "verify";
                out.report.add("commutation", "X_i X_j = X_j X_i", commutationResidual(tupleOperators(f)), opt.tol);
                double excess = std::max(0.0, operatorNorm(f.contraction) - 1);
                for (const auto& a : f.ops) excess = std::max(excess, operatorNorm(a) - 1);
                out.report.add("norm gates", "||C|| <= 1 and ||A_k|| <= 1", excess, opt.tol);
            } else {
                std::optional<Eigen::Index> cols;
                if (certified) cols = static_cast<Eigen::Index>(*certified);
                out.report = gammaIsometryCheck(f, opt.tol, cols);
            }
            out.payload = {{"variant", variantName(f.variant)}, {"dim", f.dim()}};
            return out;
        };
    });

    // fundamental
    std::string outPath;
    bool adjoint = false;
    auto* fund = app.add_subcommand("fundamental", "solve the fundamental operator equations");
    fund->add_option("--tuple", tuplePath)->required();
    fund->add_option("--out", outPath, "write the solved operators as a symbol file");
    fund->add_flag("--adjoint", adjoint, "solve for the adjoint tuple");
    fund->callback([&] {
        run = [&] {
            PairedFamily f = tupleFromJson(readJson(tuplePath));
            if (adjoint) {
                f.contraction = Mat(f.contraction.adjoint());
                for (auto& a : f.ops) a = Mat(a.adjoint());
            }
            const FundamentalSet x = solveFundamental(f);
            Outcome out;
            out.report = fundamentalReport(f, x, opt.tol);
            const SymbolFamily s{f.variant, x.X};
            out.payload = {{"rank", x.rank()}, {"symbols", symbolsToJson(s)}};
            if (!outPath.empty()) writeJson(outPath, symbolsToJson(s));
            const auto names = fundamentalNames(f.variant);
            if (x.rank() == 1) {
                Vec v(static_cast<Eigen::Index>(x.X.size()));
                for (std::size_t k = 0; k < x.X.size(); ++k) v(k) = x.X[k](0, 0);
                out.summary.push_back("scalar fundamentals " + formatVec(v));
            }
            return out;
        };
    });

    // theta
    int terms = 16;
    bool literal = false;
    auto* theta = app.add_subcommand("theta", "Taylor coefficients of the characteristic function");
    theta->add_option("--matrix", matrixPath)->required();
    theta->add_option("--terms", terms)->check(CLI::NonNegativeNumber);
    theta->add_flag("--literal", literal, "constant-term convention without the factor z");
    theta->callback([&] {
        run = [&] {
            const Mat t = matrixFromJson(readJson(matrixPath));
            const auto th = thetaSeries(t, terms, literal ? ThetaConvention::Literal : ThetaConvention::Classical);
            Outcome out;
            out.report.command = "theta";
            json coeffs = json::array();
            for (const auto& c : th.coefficients) coeffs.push_back(matrixToJson(c));
            out.payload = {{"coefficients", coeffs},
                           {"tailBound", std::isfinite(th.tailBound) ? json(th.tailBound) : json("inf")},
                           {"decaying", th.decaying}};
            out.report.notes.push_back("tail bound " + std::to_string(th.tailBound));
            out.summary.push_back(std::to_string(th.coefficients.size()) + " coefficients, " +
                                  std::to_string(th.domain.rank()) + " -> " + std::to_string(th.codomain.rank()));
            return out;
        };
    });

    // wprop
    int levels = 16;
    auto* wprop = app.add_subcommand("wprop", "W W^* + M_Theta M_Theta^* = I on truncated Hardy space");
    wprop->add_option("--matrix", matrixPath)->required();
    wprop->add_option("--levels", levels)->check(CLI::PositiveNumber);
    wprop->add_flag("--literal", literal);
    wprop->callback([&] {
        run = [&] {
            const Mat t = matrixFromJson(readJson(matrixPath));
            const auto r = wPropertyResidual(t, levels, literal ? ThetaConvention::Literal : ThetaConvention::Classical);
            Outcome out;
            out.report.command = "wprop";
            out.report.add("W-property", "W W^* + M_Theta M_Theta^* = I", r.residual, std::max(opt.tol, 2 * r.powerTail));
            out.payload = {{"residual", r.residual}, {"powerTail", r.powerTail}};
            return out;
        };
    });

    // intertwine
    std::string t7Path, fPath, ftPath;
    int deg = 8;
    auto* inter = app.add_subcommand("intertwine", "pencil intertwining through the characteristic function");
    inter->add_option("--t7", t7Path, "the contraction")->required();
    inter->add_option("--f", fPath, "symbols on the defect space")->required();
    inter->add_option("--ftilde", ftPath, "symbols on the adjoint defect space")->required();
    inter->add_option("--deg", deg)->check(CLI::NonNegativeNumber);
    inter->callback([&] {
        run = [&] {
            const Mat t = matrixFromJson(readJson(t7Path));
            const auto f = symbolsFromJson(readJson(fPath));
            const auto ft = symbolsFromJson(readJson(ftPath));
            const TupleVariant v = symbolVariantCheck(f, ft);
            const auto th = thetaSeries(t, deg);
            const auto res = intertwineResidual(ft.symbols, f.symbols, th, deg);
            const auto names = fundamentalNames(v);
            Outcome out;
            out.report.command = "intertwine";
            json perDegree = json::array();
            for (std::size_t k = 0; k < res.size(); ++k) {
                const std::size_t p = res.size() - 1 - k;
                out.report.add("identity " + names[k],
                               "(" + names[k] + "t^* + " + names[p] + "t z) Theta = Theta (" + names[k] + " + " + names[p] + "^* z)",
                               *std::max_element(res[k].begin(), res[k].end()), opt.tol);
                perDegree.push_back(res[k]);
            }
            out.payload = {{"residuals", perDegree}};
            return out;
        };
    });

    // schaffer
    std::optional<int> maxDeg;
    auto* sch = app.add_subcommand("schaffer", "isometric lift on state (+) truncated Hardy space");
    sch->add_option("--tuple", tuplePath)->required();
    sch->add_option("--levels", levels)->check(CLI::Range(2, 1 << 20));
    sch->add_option("--maxdeg", maxDeg)->check(CLI::NonNegativeNumber);
    sch->add_option("--out", outPath, "write the dilation tuple");
    sch->callback([&] {
        run = [&] {
            const PairedFamily f = tupleFromJson(readJson(tuplePath));
            const FundamentalSet x = solveFundamental(f);
            const auto d = schaffer(f, x, levels, opt.tol);
            const auto ops = tupleOperators(f);
            const int degree = maxDeg.value_or(std::min(8, levels - 2));
            Outcome out;
            out.report.command = "schaffer";
            out.report.add("lift", "Pi T_i^* = V_i^* Pi", liftResidual(d, ops), opt.tol);
            out.report.add("dilation identity", "P_state p(V) Pi = p(T), deg p <= " + std::to_string(degree),
                           dilationIdentityCheck(d, ops, degree, 64, opt.seed), opt.tol);
            const PairedFamily lifted = f.variant == TupleVariant::Gamma7 ? family(d.tuple7()) : family(d.tuple5());
            out.report.merge(gammaIsometryCheck(lifted, opt.tol, d.certifiedColumns()), "dilation: ");
            out.report.notes.push_back("boundary defect on the top Hardy level: " + std::to_string(d.boundaryDefect));
            out.payload = {{"dim", d.dim()}, {"fiberDim", d.fiberDim}, {"boundaryDefect", d.boundaryDefect}};
            if (!outPath.empty()) writeJson(outPath, tupleToJson(lifted));
            return out;
        };
    });

    // douglas
    auto* dou = app.add_subcommand("douglas", "observability and asymptotic embedding");
    dou->add_option("--tuple", tuplePath)->required();
    dou->add_option("--levels", levels)->check(CLI::PositiveNumber);
    dou->callback([&] {
        run = [&] {
            const PairedFamily f = tupleFromJson(readJson(tuplePath));
            const auto e = douglasEmbedding(f, levels, opt.tol);
            Outcome out;
            out.report = e.report;
            out.payload = {{"isometryResidual", e.isometryResidual}, {"tailBound", e.tailBound}};
            return out;
        };
    });

    // canonical
    auto* can = app.add_subcommand("canonical", "canonical unitary part on Ran Q");
    can->add_option("--tuple", tuplePath)->required();
    can->callback([&] {
        run = [&] {
            const PairedFamily f = tupleFromJson(readJson(tuplePath));
            const auto cu = canonicalUnitary(f, opt.tol);
            Outcome out;
            out.report = cu.report;
            json spectrum = json::array();
            for (const auto& p : cu.jointSpectrum) {
                spectrum.push_back(vectorToJson(p));
                out.summary.push_back("joint eigenvalue " + formatVec(p));
            }
            out.payload = {{"rank", cu.rank()}, {"jointSpectrum", spectrum}};
            return out;
        };
    });

    // admissible
    std::string partnerPath;
    auto* adm = app.add_subcommand("admissible", "tuple from admissible symbols on the adjoint defect space");
    adm->add_option("--t7", t7Path, "pure contraction")->required();
    adm->add_option("--ftilde", ftPath)->required();
    adm->add_option("--levels", levels)->check(CLI::PositiveNumber);
    adm->add_option("--f", partnerPath, "partner symbols on the defect space");
    adm->add_option("--out", outPath, "write the constructed tuple");
    adm->callback([&] {
        run = [&] {
            const Mat t = matrixFromJson(readJson(t7Path));
            const auto ft = symbolsFromJson(readJson(ftPath));
            std::optional<std::vector<Mat>> partner;
            if (!partnerPath.empty()) {
                const auto f = symbolsFromJson(readJson(partnerPath));
                symbolVariantCheck(f, ft);
                partner = f.symbols;
            }
            const auto r = admissibleConstruct(ft.variant, t, ft.symbols, levels, opt.tol, partner);
            Outcome out;
            out.report = r.report;
            out.payload = {{"tuple", tupleToJson(r.tuple)}};
            if (!outPath.empty()) writeJson(outPath, tupleToJson(r.tuple));
            return out;
        };
    });

    // gamma-unitary
    std::string symbolsPath;
    int modes = 4;
    auto* gu = app.add_subcommand("gamma-unitary", "circulant unitary extension over the M-th roots of unity");
    gu->add_option("--symbols", symbolsPath)->required();
    gu->add_option("--modes", modes)->check(CLI::PositiveNumber);
    gu->add_option("--out", outPath, "write the tuple");
    gu->callback([&] {
        run = [&] {
            const auto s = symbolsFromJson(readJson(symbolsPath));
            const PairedFamily f = s.variant == TupleVariant::Gamma7 ? family(circulantGammaUnitary7(s.symbols, modes))
                                                                     : family(circulantGammaUnitary5(s.symbols, modes));
            Outcome out;
            out.report = gammaIsometryCheck(f, opt.tol);
            out.report.command = "gamma-unitary";
            double normality = 0;
            for (const auto& a : tupleOperators(f)) normality = std::max(normality, operatorNorm(Mat(a * a.adjoint() - a.adjoint() * a)));
            out.report.add("normality", "N_i N_i^* = N_i^* N_i", normality, opt.tol);
            out.report.notes.push_back("max per-frequency pencil norm " + std::to_string(circulantPencilNorm(s.symbols, modes)));
            out.payload = {{"dim", f.dim()}};
            if (!outPath.empty()) writeJson(outPath, tupleToJson(f));
            return out;
        };
    });

    // generate
    std::string kindText;
    long dim = 1;
    auto* gen = app.add_subcommand("generate", "seeded valid test tuples");
    gen->add_option("--kind", kindText)->required();
    gen->add_option("--dim", dim, "fiber dimension")->check(CLI::PositiveNumber);
    gen->add_option("--levels", levels, "Hardy levels or circulant modes")->check(CLI::PositiveNumber);
    gen->add_option("--out", outPath);
    gen->callback([&] {
        run = [&] {
            GeneratorSpec spec{parseGeneratorKind(kindText), opt.seed, static_cast<Eigen::Index>(dim), levels};
            const PairedFamily f = generate(spec);
            Outcome out;
            out.report.command = "generate";
            out.report.add("commutation", "X_i X_j = X_j X_i", commutationResidual(tupleOperators(f)), 1e-10);
            const json tj = tupleToJson(f);
            if (!outPath.empty()) writeJson(outPath, tj);
            else out.payload = tj;
            out.summary.push_back(to_string(spec.kind) + " of dimension " + std::to_string(f.dim()) +
                                  (outPath.empty() ? "" : " written to " + outPath));
            return out;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        Outcome out = run();
        return emit(opt, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exitCodeFor(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
