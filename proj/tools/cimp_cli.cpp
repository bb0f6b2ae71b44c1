#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cimp/engine.hpp"
#include "cimp/spectra.hpp"
#include "cimp/testgen.hpp"

using namespace cimp;
using nlohmann::json;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInapplicable = 3;
constexpr int kExitCap = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Engine engine_from_name(const std::string& name) {
    if (name == "auto") return Engine::Auto;
    if (name == "oracle") return Engine::Oracle;
    if (name == "buchberger") return Engine::Buchberger;
    if (name == "dualdisc") return Engine::DualDisc;
    if (name == "modp") return Engine::ModP;
    throw ParseError("unknown engine '" + name + "'");
}

std::string witness_to_string(const std::vector<int>& w, const std::vector<std::string>& names) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += " ";
        out += names[i] + "=" + std::to_string(w[i]);
    }
    return out;
}

struct Output {
    bool as_json = false;
    json j;

    void kv(const std::string& key, const std::string& value) {
        if (as_json)
            j[key] = value;
        else
            std::cout << key << ": " << value << "\n";
    }
    void head(const std::string& line) {
        if (as_json)
            j["result"] = line;
        else
            std::cout << line << "\n";
    }
    void flush() {
        if (as_json) std::cout << j.dump(2) << "\n";
    }
};

void print_decision(Output& out, bool member, const std::string& engine,
                    const std::optional<std::vector<int>>& witness,
                    const std::vector<std::string>& names) {
    out.head(member ? "MEMBER" : "NOT_MEMBER");
    out.kv("engine", engine);
    if (witness) {
        if (out.as_json) {
            json w;
            for (std::size_t i = 0; i < witness->size(); ++i) w[names[i]] = (*witness)[i];
            out.j["witness"] = w;
        } else {
            out.kv("witness", witness_to_string(*witness, names));
        }
    }
    out.flush();
}

int decide_system(const std::string& system_path, const std::string& poly_text,
                  std::optional<int> degree_bound, long long cap, bool as_json) {
    VarTable vars;
    ModPSystem s = parse_modp_system(slurp(system_path), vars);
    Polynomial f0 = parse_polynomial(poly_text, vars, false);
    f0 = f0.remap(s.nvars, MonomialOrder::natural(s.nvars));
    int d = degree_bound ? *degree_bound : std::max(f0.degree(), 0);
    bool member = decide_modp(f0, s, d);

    std::optional<std::vector<int>> witness;
    if (!member) {
        long long space = 1;
        for (int i = 0; i < s.nvars; ++i) {
            space *= s.p;
            if (space > cap)
                throw CapExceeded("system witness scan exceeds cap " + std::to_string(cap));
        }
        for (const auto& sol : s.solutions())
            if (f0.evaluate(sol) != 0) {
                witness = sol;
                break;
            }
    }
    Output out;
    out.as_json = as_json;
    print_decision(out, member, "modp", witness, vars.names());
    return 0;
}

int cmd_decide(const std::string& instance_path, const std::string& system_path,
               const std::string& poly_text, const std::string& engine,
               std::optional<int> degree_bound, long long cap, bool as_json) {
    if (!system_path.empty()) return decide_system(system_path, poly_text, degree_bound, cap, as_json);
    CspInstance p = parse_csp(slurp(instance_path));
    VarTable vars = p.var_table();
    Polynomial f0 = parse_polynomial(poly_text, vars, false);
    f0 = f0.remap(p.var_count(), MonomialOrder::natural(p.var_count()));

    EngineOptions opts;
    opts.degree_bound = degree_bound;
    opts.enumeration_cap = cap;
    Decision d = decide_with_witness(f0, p, engine_from_name(engine), opts);

    Output out;
    out.as_json = as_json;
    print_decision(out, d.member, d.engine, d.witness, p.variables);
    return 0;
}

int cmd_gb(const std::string& instance_path, const std::string& engine,
           std::optional<int> degree_bound, bool as_json) {
    CspInstance p = parse_csp(slurp(instance_path));
    GroebnerBasis gb{{}, MonomialOrder::grlex(p.var_count()), std::nullopt};
    if (engine == "dualdisc") {
        gb = dual_disc_groebner(p);
    } else if (engine == "buchberger" || engine == "auto") {
        gb = buchberger(instance_ideal(p), MonomialOrder::grlex(p.var_count()), degree_bound);
    } else {
        throw ParseError("gb: engine must be buchberger or dualdisc");
    }
    Output out;
    out.as_json = as_json;
    out.kv("generators", std::to_string(gb.generators.size()));
    if (as_json) {
        json arr = json::array();
        for (const auto& g : gb.generators) arr.push_back(format_polynomial(g, p.variables));
        out.j["basis"] = arr;
    } else {
        for (const auto& g : gb.generators)
            std::cout << "g: " << format_polynomial(g, p.variables) << "\n";
    }
    out.flush();
    return 0;
}

int cmd_convert(const std::string& system_path, const std::string& poly_text, int degree_bound,
                bool as_json) {
    VarTable vars;
    ModPSystem s = parse_modp_system(slurp(system_path), vars);
    auto rref = rref_mod_p(s);
    Output out;
    out.as_json = as_json;
    if (!rref) {
        out.head("INCONSISTENT");
        out.kv("note", "1 lies in the ideal; every polynomial is a member");
        out.flush();
        return 0;
    }
    ImplicitBasis g1 = implicit_G1(*rref, s.nvars, s.p);
    ConversionResult conv = convert_truncated_gb(g1, degree_bound);
    out.kv("p", std::to_string(s.p));
    out.kv("degree_bound", std::to_string(degree_bound));
    out.kv("generators", std::to_string(conv.basis.generators.size()));
    out.kv("standard_monomials", std::to_string(conv.standard_monomials.size()));
    if (as_json) {
        json arr = json::array();
        for (const auto& g : conv.basis.generators)
            arr.push_back(format_polynomial(g, vars.names()));
        out.j["basis"] = arr;
        json mono = json::array();
        for (const auto& m : conv.standard_monomials)
            mono.push_back(format_polynomial(Polynomial::monomial(s.nvars, m, 1), vars.names()));
        out.j["standard"] = mono;
    } else {
        for (const auto& g : conv.basis.generators)
            std::cout << "g: " << format_polynomial(g, vars.names()) << "\n";
        for (const auto& m : conv.standard_monomials)
            std::cout << "b: " << format_polynomial(Polynomial::monomial(s.nvars, m, 1), vars.names())
                      << "\n";
    }
    if (!poly_text.empty()) {
        Polynomial f0 = parse_polynomial(poly_text, vars, false);
        f0 = f0.remap(s.nvars, MonomialOrder::natural(s.nvars));
        if (f0.degree() > degree_bound)
            throw CapExceeded("convert: polynomial degree exceeds --degree-bound");
        bool member = normal_form(f0, conv.basis).is_zero();
        out.kv("membership", member ? "MEMBER" : "NOT_MEMBER");
    }
    out.flush();
    return 0;
}

int cmd_verify_basis(int p, int k, bool as_json) {
    Output out;
    out.as_json = as_json;
    bool all = true;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        all = all && pass;
        if (as_json) {
            out.j[name] = {{"pass", pass}, {"detail", detail}};
        } else {
            std::cout << (pass ? "PASS" : "FAIL") << "  " << name << "  " << detail << "\n";
        }
    };

    {
        ExactMatrix m = basis_value_matrix(k, p);
        std::size_t want = m.cols();
        std::size_t got = rank_exact(m);
        report("basis_rank", got == want,
               "rank " + std::to_string(got) + " of " + std::to_string(m.rows()) + "x" +
                   std::to_string(m.cols()));
    }
    {
        ExactMatrix nk = build_Nk(k, p);
        std::size_t got = rank_exact(nk);
        std::size_t corrected = 1;
        for (int i = 0; i <= k; ++i) corrected *= static_cast<std::size_t>(p - 1);
        corrected += 1;
        report("nk_rank", got == corrected,
               "rank " + std::to_string(got) + ", (p-1)^(k+1)+1 = " + std::to_string(corrected));
    }
    {
        EigenReport rep = eigen_formula_check(k, p);
        report("eigen_formula", rep.all_pass,
               std::to_string(rep.samples.size()) + " root-of-unity samples");
    }
    {
        ExactMatrix fp = fprime_value_matrix(k, p);
        std::size_t want = 1;
        for (int i = 0; i <= k; ++i) want *= static_cast<std::size_t>(p - 1);
        std::size_t got = rank_exact(fp);
        report("fprime_rank", got == want,
               "rank " + std::to_string(got) + ", (p-1)^(k+1) = " + std::to_string(want));
    }
    if (p == 3) {
        ExactMatrix c = build_C3(k);
        std::size_t want = 1;
        for (int i = 0; i < k; ++i) want *= 3;
        want -= 1;
        std::size_t got = rank_exact(c);
        report("c3_rank", got == want,
               "rank " + std::to_string(got) + ", 3^n-1 = " + std::to_string(want));
    }
    out.flush();
    return all ? 0 : 1;
}

int cmd_oracle_diff(int count, unsigned seed, const std::string& family, long long cap,
                    bool as_json) {
    std::mt19937 rng(seed);
    Output out;
    out.as_json = as_json;
    int ran = 0;
    for (int i = 0; i < count; ++i) {
        std::string fam = family;
        if (fam == "all") {
            const char* fams[] = {"dualdisc", "modp", "generic"};
            fam = fams[i % 3];
        }
        CspInstance p;
        Engine engine = Engine::Auto;
        if (fam == "dualdisc") {
            int t = 2 + testgen::uniform(rng, 0, 1);
            p = testgen::random_dual_disc_instance(rng, t, testgen::uniform(rng, 2, 4),
                                                   testgen::uniform(rng, 1, 4));
            engine = Engine::DualDisc;
        } else if (fam == "modp") {
            const int ps[] = {2, 3, 5};
            int pp = ps[testgen::uniform(rng, 0, 2)];
            p = testgen::random_affine_instance(rng, pp, testgen::uniform(rng, 2, 5),
                                                testgen::uniform(rng, 1, 3));
            engine = Engine::ModP;
        } else if (fam == "generic") {
            p = testgen::random_mixed_instance(rng, 2 + testgen::uniform(rng, 0, 1),
                                               testgen::uniform(rng, 2, 3),
                                               testgen::uniform(rng, 1, 2));
            engine = Engine::Buchberger;
        } else {
            throw ParseError("unknown family '" + family + "'");
        }
        Polynomial f0 = testgen::random_polynomial(rng, p.var_count(), 3, 4);
        bool oracle = decide_oracle(f0, p, cap);
        bool engine_says = decide(f0, p, engine, {}).member;
        ++ran;
        if (oracle != engine_says) {
            out.head("DISAGREE");
            out.kv("family", fam);
            out.kv("index", std::to_string(i));
            out.kv("instance", format_csp(p));
            out.kv("poly", format_polynomial(f0, p.variables));
            out.kv("oracle", oracle ? "MEMBER" : "NOT_MEMBER");
            out.kv("engine", engine_says ? "MEMBER" : "NOT_MEMBER");
            out.flush();
            return 1;
        }
    }
    out.head("PASS");
    out.kv("instances", std::to_string(ran));
    out.flush();
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact ideal membership for CSP-defined combinatorial ideals"};
    app.require_subcommand(1);

    std::string instance_path, poly_text, system_path;
    std::string engine = "auto", family = "all";
    int degree_bound = -1, p_flag = 3, k_flag = 1, count = 100;
    long long cap = kDefaultEnumerationCap;
    unsigned seed = 0;
    bool as_json = false;

    app.add_flag("--json", as_json, "machine-readable output");

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--instance", instance_path, "CSP instance file");
        cmd->add_option("--system", system_path, "mod-p linear system file");
        cmd->add_option("--poly", poly_text, "polynomial text")->required();
        cmd->add_option("--degree-bound", degree_bound, "degree truncation bound");
        cmd->add_option("--cap", cap, "enumeration cap");
        cmd->add_option("--engine", engine, "auto|oracle|buchberger|dualdisc|modp");
    };

    CLI::App* decide_cmd = app.add_subcommand("decide", "decide ideal membership");
    add_common(decide_cmd);

    CLI::App* witness_cmd = app.add_subcommand("witness", "find a non-membership witness");
    add_common(witness_cmd);

    CLI::App* gb_cmd = app.add_subcommand("gb", "print a Groebner basis of the instance ideal");
    gb_cmd->add_option("--instance", instance_path, "CSP instance file")->required();
    gb_cmd->add_option("--engine", engine, "buchberger|dualdisc");
    gb_cmd->add_option("--degree-bound", degree_bound, "degree truncation bound");

    CLI::App* convert_cmd =
        app.add_subcommand("convert", "truncated grlex basis of a mod-p linear system");
    convert_cmd->add_option("--system", system_path, "linear system file")->required();
    convert_cmd->add_option("--degree-bound", degree_bound, "degree truncation bound")->required();
    convert_cmd->add_option("--poly", poly_text, "optional membership query");

    CLI::App* verify_cmd = app.add_subcommand("verify-basis", "rank checks of the value matrices");
    verify_cmd->add_option("--p", p_flag, "prime modulus")->required();
    verify_cmd->add_option("--k", k_flag, "basis level")->required();

    CLI::App* diff_cmd = app.add_subcommand("oracle-diff", "randomized engine vs oracle check");
    diff_cmd->add_option("--count", count, "number of instances");
    diff_cmd->add_option("--seed", seed, "random seed");
    diff_cmd->add_option("--family", family, "dualdisc|modp|generic|all");
    diff_cmd->add_option("--cap", cap, "enumeration cap");

    try {
        app.parse(argc, argv);
        if (decide_cmd->parsed() || witness_cmd->parsed()) {
            if (instance_path.empty() && system_path.empty())
                throw ParseError("decide: need --instance or --system");
            return cmd_decide(instance_path, system_path, poly_text, engine,
                              degree_bound >= 0 ? std::optional<int>(degree_bound) : std::nullopt,
                              cap, as_json);
        }
        if (gb_cmd->parsed())
            return cmd_gb(instance_path, engine,
                          degree_bound >= 0 ? std::optional<int>(degree_bound) : std::nullopt,
                          as_json);
        if (convert_cmd->parsed())
            return cmd_convert(system_path, poly_text, degree_bound, as_json);
        if (verify_cmd->parsed()) return cmd_verify_basis(p_flag, k_flag, as_json);
        if (diff_cmd->parsed()) return cmd_oracle_diff(count, seed, family, cap, as_json);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const EngineInapplicable& e) {
        std::cerr << "engine inapplicable: " << e.what() << "\n";
        return kExitInapplicable;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kExitCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
