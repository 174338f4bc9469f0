#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polyfun/derived.hpp"
#include "polyfun/json_io.hpp"
#include "polyfun/koeck.hpp"
#include "polyfun/suites.hpp"

using namespace polyfun;

namespace {

/* inline JSON text or a path to a JSON file */
Json load_json_arg(const std::string& arg, const char* what) {
    std::string text = arg;
    size_t p = arg.find_first_not_of(" \t\r\n");
    char c = (p == std::string::npos) ? '\0' : arg[p];
    if (c != '{' && c != '[') {
        std::ifstream in(arg);
        if (!in) throw std::invalid_argument(std::string(what) + ": cannot open '" + arg + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(std::string(what) + ": " + e.what());
    }
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

FunctorDescriptor functor_arg_to_descriptor(const std::string& arg) {
    return parse_functor(lower(arg));
}

Setting parse_setting(const std::string& arg) {
    std::string s = lower(arg);
    if (s == "fin") return Setting::FIN;
    if (s == "fg") return Setting::FG;
    throw std::invalid_argument("setting: expected fin or fg, got '" + arg + "'");
}

/* "a/b" or a signed integer */
Rat parse_class(const std::string& arg) {
    size_t slash = arg.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(arg));
        Int num(arg.substr(0, slash));
        Int den(arg.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("class: expected a/b or an integer, got '" + arg + "'");
    }
}

/* "Z/4", "Z^2", "Z/4@1 + Z", "0": direct sums of cyclic pieces placed by degree,
 * with zero differentials */
GenChainComplex parse_shorthand(const std::string& arg) {
    struct Piece {
        int degree;
        Int modulus;  // 0 for a free generator
    };
    std::vector<Piece> pieces;
    int top = 0;
    std::string s;
    for (char c : arg)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("complex: empty description");
    size_t pos = 0;
    while (pos < s.size()) {
        size_t plus = s.find('+', pos);
        std::string term = s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        pos = plus == std::string::npos ? s.size() : plus + 1;
        int degree = 0;
        size_t at = term.find('@');
        if (at != std::string::npos) {
            try {
                degree = std::stoi(term.substr(at + 1));
            } catch (const std::exception&) {
                throw std::invalid_argument("complex: bad degree in '" + term + "'");
            }
            if (degree < 0) throw std::invalid_argument("complex: negative degree");
            term = term.substr(0, at);
        }
        top = std::max(top, degree);
        if (term == "0") continue;
        if (term == "Z") {
            pieces.push_back({degree, 0});
        } else if (term.rfind("Z^", 0) == 0) {
            int n = 0;
            try {
                n = std::stoi(term.substr(2));
            } catch (const std::exception&) {
                throw std::invalid_argument("complex: bad rank in '" + term + "'");
            }
            if (n < 0) throw std::invalid_argument("complex: negative rank");
            for (int i = 0; i < n; ++i) pieces.push_back({degree, 0});
        } else if (term.rfind("Z/", 0) == 0) {
            Int m;
            try {
                m = Int(term.substr(2));
            } catch (const std::exception&) {
                throw std::invalid_argument("complex: bad modulus in '" + term + "'");
            }
            if (m < 1) throw std::invalid_argument("complex: modulus must be positive");
            pieces.push_back({degree, m});
        } else {
            throw std::invalid_argument("complex: cannot read term '" + term + "'");
        }
    }
    GenChainComplex c;
    c.top = top;
    c.groups.clear();
    for (int i = 0; i <= top; ++i) {
        std::vector<Int> moduli;
        for (const auto& p : pieces)
            if (p.degree == i) moduli.push_back(p.modulus);
        PresentedGroup g{static_cast<int>(moduli.size()), IntMatrix(0, 0)};
        int rels = 0;
        for (const auto& m : moduli)
            if (m != 0) ++rels;
        g.rels = IntMatrix(g.gens, rels);
        int col = 0;
        for (int row = 0; row < g.gens; ++row)
            if (moduli[row] != 0) g.rels.at(row, col++) = moduli[row];
        c.groups.push_back(g);
    }
    for (int i = 0; i < top; ++i)
        c.maps.push_back(IntMatrix(c.groups[i].gens, c.groups[i + 1].gens));
    return c;
}

GenChainComplex parse_complex(const std::string& arg) {
    size_t p = arg.find_first_not_of(" \t\r\n");
    char c = (p == std::string::npos) ? '\0' : arg[p];
    bool inline_json = (c == '{' || c == '[');
    bool is_file = false;
    if (!inline_json) {
        std::ifstream probe(arg);
        is_file = probe.good();
    }
    if (!inline_json && !is_file) return parse_shorthand(arg);
    Json j = load_json_arg(arg, "complex");
    if (j.is_object() && j.contains("groups")) return gen_complex_from_json(j);
    if (j.is_object() && j.contains("ranks")) return free_to_gen(complex_from_json(j));
    throw std::invalid_argument("complex: expected a free or generated chain complex");
}

void emit(const Json& out) { std::cout << out.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact homological algebra for polynomial functors"};
    app.require_subcommand(1);

    std::string matrix_arg, complex_arg, functor_arg, setting_arg = "fg", class_arg;
    std::string injection_arg, suite_arg;
    std::vector<int> ranks_arg;
    int max_degree = 0;
    int trials = 25;
    unsigned long long seed = 0;

    auto* snf = app.add_subcommand("snf", "smith normal form of an integer matrix");
    snf->add_option("--matrix", matrix_arg, "matrix as JSON text or a path to a JSON file")
        ->required();

    auto* hom = app.add_subcommand("homology", "homology groups of a chain complex");
    hom->add_option("--complex", complex_arg, "complex as JSON, a file path, or shorthand like Z/4")
        ->required();

    auto* grp = app.add_subcommand("group", "canonical form of a presented abelian group");
    grp->add_option("--matrix", matrix_arg, "presentation matrix, one row per generator")
        ->required();

    auto* der = app.add_subcommand("derive", "left derived functor values of a complex");
    der->add_option("--functor", functor_arg, "sym:d, ext:d, div:d, tensor:d, or id")->required();
    der->add_option("--complex", complex_arg, "complex as JSON, a file path, or shorthand like Z/4")
        ->required();
    der->add_option("--max-degree", max_degree, "largest derived degree to compute")->required();
    der->add_option("--setting", setting_arg, "fin or fg (default fg)");

    auto* cross = app.add_subcommand("cross-effect", "cross effect space of a functor");
    cross->add_option("--functor", functor_arg, "sym:d, ext:d, div:d, tensor:d")->required();
    cross->add_option("--ranks", ranks_arg, "argument ranks, comma separated")
        ->required()
        ->delimiter(',');

    auto* koeck = app.add_subcommand("koeck", "resolution of F(Y/X) from a split injection");
    koeck->add_option("--functor", functor_arg, "sym:d, ext:d, div:d, tensor:d")->required();
    koeck->add_option("--injection", injection_arg, "injection matrix X -> Y, as JSON or a file")
        ->required();

    auto* euler = app.add_subcommand("euler", "induced map on Euler characteristics");
    euler->add_option("--functor", functor_arg, "sym:d, ext:d, div:d, tensor:d")->required();
    euler->add_option("--setting", setting_arg, "fin or fg (default fg)");
    euler->add_option("--class", class_arg, "a/b in fin, a signed integer in fg")->required();

    auto* check = app.add_subcommand("check", "seeded property suites");
    check->add_option("--suite", suite_arg, "koeck, dk, cross, theorem1, oracle, or chi")
        ->required();
    check->add_option("--trials", trials, "number of independent trials (default 25)");
    check->add_option("--seed", seed, "base seed; trial t draws from its own stream");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (snf->parsed()) {
            IntMatrix m = matrix_from_json(load_json_arg(matrix_arg, "matrix"));
            emit(snf_to_json(smith_normal_form(m)));
            return 0;
        }
        if (hom->parsed()) {
            GenChainComplex c = parse_complex(complex_arg);
            validate_complex(c);
            Json groups = Json::array();
            for (const auto& g : homology_all(c)) groups.push_back(group_to_json(g));
            emit(Json{{"homology", std::move(groups)}});
            return 0;
        }
        if (grp->parsed()) {
            IntMatrix m = matrix_from_json(load_json_arg(matrix_arg, "matrix"));
            emit(group_to_json(group_from_presentation(m)));
            return 0;
        }
        if (der->parsed()) {
            DerivedRequest req;
            req.functor = functor_arg_to_descriptor(functor_arg);
            req.input = parse_complex(complex_arg);
            validate_complex(req.input);
            req.max_degree = max_degree;
            req.setting = parse_setting(setting_arg);
            if (max_degree < 0) throw std::invalid_argument("max-degree must be nonnegative");
            Json groups = Json::array();
            for (const auto& g : derived_functor(req)) groups.push_back(group_to_json(g));
            emit(Json{{"derived", std::move(groups)}});
            return 0;
        }
        if (cross->parsed()) {
            FunctorDescriptor f = functor_arg_to_descriptor(functor_arg);
            for (int r : ranks_arg)
                if (r < 0) throw std::invalid_argument("ranks must be nonnegative");
            CrossEffectSpace s = cross_effect_space(f, ranks_arg);
            emit(Json{{"argument_ranks", s.argument_ranks},
                      {"ambient_rank", s.ambient_rank},
                      {"rank", s.rank()},
                      {"inclusion", matrix_to_json(s.inclusion)},
                      {"projection", matrix_to_json(s.projection)}});
            return 0;
        }
        if (koeck->parsed()) {
            FunctorDescriptor f = functor_arg_to_descriptor(functor_arg);
            IntMatrix u = matrix_from_json(load_json_arg(injection_arg, "injection"));
            KoeckGrid grid = build_koeck(f, u);
            FreeChainComplex total = total_complex(grid, true);
            CheckReport rep = check_koeck_resolution(f, u);
            emit(Json{{"total", complex_to_json(total)}, {"report", report_to_json(rep)}});
            return rep.pass ? 0 : 1;
        }
        if (euler->parsed()) {
            EulerMapRequest req;
            req.functor = functor_arg_to_descriptor(functor_arg);
            req.setting = parse_setting(setting_arg);
            req.k0_input = parse_class(class_arg);
            emit(Json{{"value", euler_map(req).str()}});
            return 0;
        }
        if (check->parsed()) {
            std::cerr << "polyfun: suite " << suite_arg << " trials=" << trials
                      << " seed=" << seed << "\n";
            SuiteResult res = run_suite(suite_arg, trials, seed);
            Json out{{"suite", res.suite},
                     {"trials", res.trials},
                     {"passed", res.passed},
                     {"failed", res.trials - res.passed},
                     {"pass", res.all_pass()}};
            const CheckReport* first = res.first_failure();
            out["first_failure"] = first ? report_to_json(*first) : Json(nullptr);
            emit(out);
            return res.all_pass() ? 0 : 1;
        }
    } catch (const SettingError& e) {
        std::cerr << "polyfun: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "polyfun: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "polyfun: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
