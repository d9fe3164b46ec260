#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "histforce/checks.hpp"
#include "histforce/condition.hpp"
#include "histforce/errors.hpp"
#include "histforce/generate.hpp"
#include "histforce/signatures.hpp"
#include "histforce/table.hpp"
#include "histforce/term.hpp"
#include "histforce/wire.hpp"

namespace {

using namespace histforce;
using nlohmann::ordered_json;

condition_ptr load_condition(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_string(buf.str());
}

void store_condition(const std::string& path, const condition& p) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw format_error("cannot write " + path);
    out << encode_string(p) << '\n';
}

// "0,2,3" -> {0,2,3}; "" -> {}.  Must be ascending.
std::vector<std::uint32_t> parse_levels(const std::string& csv) {
    std::vector<std::uint32_t> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t comma = csv.find(',', pos);
        std::string tok =
            csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            unsigned long v = std::stoul(tok, &used);
            if (used != tok.size() || v > 0xFFFFFFFFul) throw std::invalid_argument(tok);
            out.push_back(std::uint32_t(v));
        } catch (const std::exception&) {
            throw invalid_input("levels: bad entry '" + tok + "' in '" + csv + "'");
        }
        pos = comma == std::string::npos ? csv.size() : comma + 1;
    }
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i - 1] >= out[i]) throw invalid_input("levels must be strictly ascending: " + csv);
    return out;
}

template <typename T>
ordered_json num_list(const std::vector<T>& xs) {
    ordered_json a = ordered_json::array();
    for (const T& x : xs) a.push_back(x);
    return a;
}

bool contains_level(const std::vector<std::uint32_t>& z, std::uint32_t b) {
    return std::binary_search(z.begin(), z.end(), b);
}

bool level_map_fixes_overlap(const std::vector<std::uint32_t>& z0,
                             const std::vector<std::uint32_t>& z1) {
    if (z0.size() != z1.size()) return false;
    for (std::size_t l = 0; l < z0.size(); ++l) {
        if (contains_level(z1, z0[l]) && z1[l] != z0[l]) return false;
        if (contains_level(z0, z1[l]) && z0[l] != z1[l]) return false;
    }
    return true;
}

ordered_json report_json(const std::string& file, const std::vector<check_report>& reports) {
    ordered_json checks = ordered_json::array();
    for (const auto& r : reports)
        checks.push_back(ordered_json{{"name", r.name},
                                      {"verdict", r.pass ? "pass" : "fail"},
                                      {"counterexample", r.counterexample},
                                      {"ms", r.ms}});
    return ordered_json{{"file", file}, {"checks", checks}};
}

struct gen_opts {
    std::uint64_t seed = 0;
    std::uint32_t width = 2;
    std::uint32_t height = 0;
    std::string pool = "mixed";
    std::string hearts = "none";
    std::uint32_t gap = 1;
    std::string out;
};

int cmd_gen(const gen_opts& o) {
    generator_spec spec;
    spec.seed = o.seed;
    spec.width = o.width;
    spec.height = o.height;
    spec.pool = pool_from_string(o.pool);
    if (o.hearts == "none")
        spec.hearts = generator_spec::heart_kind::none;
    else if (o.hearts == "occasional")
        spec.hearts = generator_spec::heart_kind::occasional;
    else
        throw invalid_input("hearts: expected none|occasional, got '" + o.hearts + "'");
    spec.block_gap = o.gap;
    condition_ptr p = generate(spec);
    if (o.out.empty())
        std::cout << encode_string(*p) << "\n";
    else
        store_condition(o.out, *p);
    return 0;
}

int cmd_validate(const std::string& file) {
    condition_ptr p;
    try {
        p = load_condition(file);
    } catch (const clause_violation& e) {
        check_report rep;
        rep.name = "clauses";
        rep.pass = false;
        rep.counterexample = ordered_json{{"clause", e.clause()}, {"error", e.what()}};
        std::cout << report_json(file, {rep}).dump() << "\n";
        return 1;
    }
    check_report rep = check_clauses(p);
    std::cout << report_json(file, {rep}).dump() << "\n";
    return rep.pass ? 0 : 1;
}

int cmd_leq(const std::string& f1, const std::string& f2, bool pure) {
    condition_ptr a = load_condition(f1);
    condition_ptr b = load_condition(f2);
    bool r = pure ? leq_pr(*a, *b) : leq(*a, *b);
    std::cout << (r ? "true" : "false") << "\n";
    return 0;
}

int cmd_transform(const std::string& fp, const std::string& fq, const std::string& out) {
    condition_ptr p = load_condition(fp);
    condition_ptr q = load_condition(fq);
    condition_ptr r = transform(p, q);
    store_condition(out, *r);
    return 0;
}

int cmd_components(const std::string& file, std::uint32_t alpha) {
    condition_ptr p = load_condition(file);
    std::vector<condition_ptr> cs = components(p, alpha);
    ordered_json arr = ordered_json::array();
    for (const auto& c : cs) arr.push_back(encode(*c));
    std::cout << ordered_json{{"file", file},
                              {"alpha", alpha},
                              {"count", cs.size()},
                              {"components", arr}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_closure(const std::string& file, const std::string& levels) {
    condition_ptr p = load_condition(file);
    std::vector<std::uint32_t> w = parse_levels(levels);
    std::vector<std::uint32_t> z = close(p, w);
    std::cout << ordered_json{{"file", file}, {"levels", num_list(w)}, {"closure", num_list(z)}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_upsilon(const std::string& file, const std::string& levels) {
    condition_ptr p = load_condition(file);
    std::vector<std::uint32_t> z = parse_levels(levels);
    upsilon_signature sig = upsilon(p, z);
    const std::uint32_t w = p->width();
    ordered_json entries = ordered_json::array();
    for (const auto& e : sig.entries) {
        ordered_json g = ordered_json::array();
        for (const auto& hv : e.g) g.push_back(hv.encoded(w));
        ordered_json h = ordered_json::array();
        for (const auto& row : e.h) {
            ordered_json hr = ordered_json::array();
            for (const auto& hv : row) hr.push_back(hv.encoded(w));
            h.push_back(hr);
        }
        entries.push_back(ordered_json{{"zeta", e.zeta},
                                       {"tau", encode_term(*e.tau)},
                                       {"n", e.n},
                                       {"g", g},
                                       {"h", h}});
    }
    std::cout << ordered_json{{"file", file}, {"levels", num_list(z)}, {"entries", entries}}.dump()
              << "\n";
    return 0;
}

int cmd_uset(const std::string& file, const std::string& levels) {
    condition_ptr p = load_condition(file);
    std::vector<std::uint32_t> z = parse_levels(levels);
    std::vector<gen_index> u = u_set(p, z);
    std::cout << ordered_json{{"file", file}, {"levels", num_list(z)}, {"u", num_list(u)}}.dump()
              << "\n";
    return 0;
}

int cmd_chain(const std::string& file) {
    condition_ptr p = load_condition(file);
    std::vector<term_instance> chain = build_maj_chain(p);
    chain_result res = longest_chain(p->table(), chain);
    ordered_json arr = ordered_json::array();
    for (const auto& inst : chain)
        arr.push_back(ordered_json{{"term", encode_term(*inst.t)}, {"args", num_list(inst.args)}});
    std::cout << ordered_json{{"file", file},
                              {"instances", arr},
                              {"strict_chain_length", res.length}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_flip(const std::string& file, const std::string& z0s, const std::string& z1s, bool all_f) {
    condition_ptr p = load_condition(file);
    std::vector<std::uint32_t> z0 = parse_levels(z0s);
    std::vector<std::uint32_t> z1 = parse_levels(z1s);
    if (!level_map_fixes_overlap(z0, z1))
        throw invalid_input("flip: the level map must fix the common levels");
    auto t0 = std::chrono::steady_clock::now();
    check_report rep;
    rep.name = "flip_closure";
    rep.condition_id = condition_id(*p);
    const auto& tbl = p->table();
    const std::size_t rows = tbl.row_count();
    std::vector<std::size_t> picks;
    if (all_f || rows <= 256) {
        for (std::size_t r = 0; r < rows; ++r) picks.push_back(r);
    } else {
        splitmix64 rng(std::stoull(rep.condition_id, nullptr, 16));
        for (std::size_t s = 0; s < 256; ++s) picks.push_back(std::size_t(rng.draw(rows)));
    }
    for (std::size_t row : picks) {
        assignment f = tbl.row_assignment(row);
        assignment g = flip(p, z0, z1, f);
        if (!tbl.has_row(g.bits)) {
            rep.pass = false;
            rep.counterexample = ordered_json{{"law", "flips stay in the table"},
                                              {"z0", num_list(z0)},
                                              {"z1", num_list(z1)},
                                              {"row", row}};
            break;
        }
    }
    rep.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                 .count();
    std::cout << report_json(file, {rep}).dump() << "\n";
    return rep.pass ? 0 : 1;
}

int cmd_suite(const std::vector<std::string>& files) {
    struct outcome {
        ordered_json doc;
        int code = 0;
    };
    std::vector<outcome> results(files.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= files.size()) break;
            const std::string& f = files[i];
            try {
                condition_ptr p = load_condition(f);
                std::vector<check_report> reports = run_suite(p, check_budget{});
                int code = 0;
                for (const auto& r : reports)
                    if (!r.pass) code = 1;
                results[i] = {report_json(f, reports), code};
            } catch (const std::exception& e) {
                results[i] = {ordered_json{{"file", f}, {"error", e.what()}}, 2};
            }
        }
    };
    const std::size_t n =
        std::min<std::size_t>(files.size(), std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> threads;
    threads.reserve(n);
    for (std::size_t i = 0; i < n; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    int worst = 0;
    for (const auto& o : results) {
        std::cout << o.doc.dump() << "\n";
        worst = std::max(worst, o.code);
    }
    return worst;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"forcing-condition workbench: generate, relate and machine-check conditions"};
    app.require_subcommand(1);

    gen_opts g;
    auto* gen = app.add_subcommand("gen", "generate a condition from a seed");
    gen->add_option("--seed", g.seed, "PRNG seed");
    gen->add_option("--width", g.width, "amalgam width (>= 2)");
    gen->add_option("--height", g.height, "condition height (<= 4)");
    gen->add_option("--pool", g.pool, "term pool: mixed|const1|var0");
    gen->add_option("--hearts", g.hearts, "heart policy: none|occasional");
    gen->add_option("--gap", g.gap, "index gap between blocks");
    gen->add_option("--out", g.out, "output file (default: stdout)");

    std::string v_file;
    auto* validate = app.add_subcommand("validate", "rebuild a file and re-check the clauses");
    validate->add_option("file", v_file)->required();

    std::string l_f1, l_f2;
    bool l_pure = false;
    auto* leqc = app.add_subcommand("leq", "print whether the first condition extends to the second");
    leqc->add_option("file_p", l_f1)->required();
    leqc->add_option("file_q", l_f2)->required();
    leqc->add_flag("--pure", l_pure, "use the pure-extension order");

    std::string t_fp, t_fq, t_out;
    auto* transformc = app.add_subcommand("transform", "transform the second condition over the first");
    transformc->add_option("file_p", t_fp)->required();
    transformc->add_option("file_q", t_fq)->required();
    transformc->add_option("--out", t_out)->required();

    std::string c_file;
    std::uint32_t c_alpha = 0;
    auto* componentsc = app.add_subcommand("components", "list the height-alpha components");
    componentsc->add_option("file", c_file)->required();
    componentsc->add_option("--alpha", c_alpha)->required();

    std::string cl_file, cl_levels;
    auto* closurec = app.add_subcommand("closure", "least closed superset of the given levels");
    closurec->add_option("file", cl_file)->required();
    closurec->add_option("--levels", cl_levels, "comma-separated levels; empty = {}");

    std::string up_file, up_levels;
    auto* upsilonc = app.add_subcommand("upsilon", "signature of a closed level set");
    upsilonc->add_option("file", up_file)->required();
    upsilonc->add_option("--levels", up_levels, "comma-separated levels; empty = {}");

    std::string us_file, us_levels;
    auto* usetc = app.add_subcommand("uset", "generators whose fingerprints lie in the levels");
    usetc->add_option("file", us_file)->required();
    usetc->add_option("--levels", us_levels, "comma-separated levels; empty = {}");

    std::string ch_file;
    auto* chainc = app.add_subcommand("chain", "majority-chain instances and strict chain length");
    chainc->add_option("file", ch_file)->required();

    std::string fl_file, fl_z0, fl_z1;
    bool fl_all = false;
    auto* flipc = app.add_subcommand("flip", "flip rows along the U-isomorphism of a closed pair");
    flipc->add_option("file", fl_file)->required();
    flipc->add_option("--z0", fl_z0, "first closed level set");
    flipc->add_option("--z1", fl_z1, "second closed level set");
    flipc->add_flag("--all-f", fl_all, "flip every row instead of a 256-row sample");

    std::vector<std::string> s_files;
    auto* suitec = app.add_subcommand("suite", "run the full check suite on each file");
    suitec->add_option("files", s_files)->required()->expected(-1);

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
        if (app.got_subcommand(gen)) return cmd_gen(g);
        if (app.got_subcommand(validate)) return cmd_validate(v_file);
        if (app.got_subcommand(leqc)) return cmd_leq(l_f1, l_f2, l_pure);
        if (app.got_subcommand(transformc)) return cmd_transform(t_fp, t_fq, t_out);
        if (app.got_subcommand(componentsc)) return cmd_components(c_file, c_alpha);
        if (app.got_subcommand(closurec)) return cmd_closure(cl_file, cl_levels);
        if (app.got_subcommand(upsilonc)) return cmd_upsilon(up_file, up_levels);
        if (app.got_subcommand(usetc)) return cmd_uset(us_file, us_levels);
        if (app.got_subcommand(chainc)) return cmd_chain(ch_file);
        if (app.got_subcommand(flipc)) return cmd_flip(fl_file, fl_z0, fl_z1, fl_all);
        if (app.got_subcommand(suitec)) return cmd_suite(s_files);
    } catch (const format_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const resource_limit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
