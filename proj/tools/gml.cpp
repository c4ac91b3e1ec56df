// gml: command-line front end for the gmlsat library.
//
// Exit codes are the machine contract: 0 SAT/TRUE, 1 UNSAT/FALSE,
// 2 UNKNOWN, 3 parse/IO errors.

#include <gmlsat.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

constexpr int kExitSat = 0;
constexpr int kExitUnsat = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;

struct Fatal {
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Fatal{"cannot read " + path};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Fatal{"cannot write " + path};
    out << text;
}

unsigned parse_frames(const std::string& text) {
    unsigned mask = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string item = text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (item == "rfl")
            mask |= GMLSAT_FRAME_RFL;
        else if (item == "ser")
            mask |= GMLSAT_FRAME_SER;
        else if (item == "sym")
            mask |= GMLSAT_FRAME_SYM;
        else if (item == "tr")
            mask |= GMLSAT_FRAME_TR;
        else if (item == "eucl")
            mask |= GMLSAT_FRAME_EUCL;
        else if (!item.empty())
            throw Fatal{"unknown frame class: " + item};
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return mask;
}

void require_ok(int status) {
    if (status != GMLSAT_OK) throw Fatal{gmlsat_last_error()};
}

using FormulaHandle =
    std::unique_ptr<gmlsat_formula, decltype(&gmlsat_formula_free)>;
using ModelHandle = std::unique_ptr<gmlsat_model, decltype(&gmlsat_model_free)>;

FormulaHandle load_formula(const std::string& path) {
    std::string text = read_file(path);
    gmlsat_formula* f = nullptr;
    require_ok(gmlsat_formula_parse(text.c_str(), &f));
    return FormulaHandle(f, gmlsat_formula_free);
}

ModelHandle load_model(const std::string& path) {
    std::string text = read_file(path);
    gmlsat_model* m = nullptr;
    require_ok(gmlsat_model_from_json(text.c_str(), &m));
    return ModelHandle(m, gmlsat_model_free);
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    gmlsat_string_free(s);
    return out;
}

int cmd_solve(const std::string& frames, const std::string& input,
              const std::string& model_out, unsigned cap, uint64_t seed) {
    FormulaHandle f = load_formula(input);
    int verdict = 0;
    gmlsat_model* model = nullptr;
    char* reason = nullptr;
    require_ok(gmlsat_solve(f.get(), parse_frames(frames), cap, seed, &verdict,
                            &model, &reason));
    ModelHandle guard(model, gmlsat_model_free);
    switch (verdict) {
        case GMLSAT_SAT: {
            std::cout << "SAT\n";
            if (!model_out.empty()) {
                char* json = nullptr;
                require_ok(gmlsat_model_to_json(model, &json));
                write_file(model_out, take_string(json) + "\n");
            }
            return kExitSat;
        }
        case GMLSAT_UNSAT:
            std::cout << "UNSAT\n";
            return kExitUnsat;
        default:
            std::cout << "UNKNOWN\n";
            if (reason) std::cerr << take_string(reason) << "\n";
            return kExitUnknown;
    }
}

int cmd_check(const std::string& model_path, const std::string& input,
              const std::string& world) {
    ModelHandle m = load_model(model_path);
    FormulaHandle f = load_formula(input);
    int truth = 0;
    require_ok(gmlsat_model_check(m.get(), world.empty() ? nullptr : world.c_str(),
                                  f.get(), &truth));
    std::cout << (truth ? "TRUE" : "FALSE") << "\n";
    return truth ? kExitSat : kExitUnsat;
}

int cmd_nf(const std::string& input) {
    FormulaHandle f = load_formula(input);
    gmlsat_formula* nf = nullptr;
    require_ok(gmlsat_formula_normal_form(f.get(), &nf));
    FormulaHandle guard(nf, gmlsat_formula_free);
    char* text = nullptr;
    require_ok(gmlsat_formula_render(nf, &text));
    std::cout << take_string(text) << "\n";
    return kExitSat;
}

int cmd_c1(const std::string& frames, const std::string& input) {
    FormulaHandle f = load_formula(input);
    char* text = nullptr;
    require_ok(gmlsat_formula_c1(f.get(), parse_frames(frames), &text));
    std::cout << take_string(text) << "\n";
    return kExitSat;
}

int cmd_minimize(const std::string& model_path, const std::string& input,
                 const std::string& model_out) {
    ModelHandle m = load_model(model_path);
    FormulaHandle f = load_formula(input);
    gmlsat_model* small = nullptr;
    require_ok(gmlsat_minimize(m.get(), f.get(), &small));
    ModelHandle guard(small, gmlsat_model_free);
    char* json = nullptr;
    require_ok(gmlsat_model_to_json(small, &json));
    std::string text = take_string(json) + "\n";
    if (model_out.empty())
        std::cout << text;
    else
        write_file(model_out, text);
    return kExitSat;
}

int cmd_tiling_gen(const std::string& tiling_path) {
    std::string json = read_file(tiling_path);
    gmlsat_formula* f = nullptr;
    require_ok(gmlsat_tiling_reduction(json.c_str(), &f));
    FormulaHandle guard(f, gmlsat_formula_free);
    char* text = nullptr;
    require_ok(gmlsat_formula_render(f, &text));
    std::cout << take_string(text) << "\n";
    return kExitSat;
}

int cmd_oracle(const std::string& frames, const std::string& input,
               unsigned max_size) {
    FormulaHandle f = load_formula(input);
    int verdict = 0;
    require_ok(gmlsat_oracle(f.get(), parse_frames(frames), max_size, &verdict,
                             nullptr));
    if (verdict == GMLSAT_SAT) {
        std::cout << "SAT\n";
        return kExitSat;
    }
    std::cout << "UNKNOWN\n";
    std::cerr << "no model with at most " << max_size << " worlds\n";
    return kExitUnknown;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graded modal logic satisfiability toolkit"};
    app.require_subcommand(1);

    std::string frames, input, model_path, model_out, world, tiling_path;
    unsigned cap = 0, max_size = 4;
    uint64_t seed = 0;

    CLI::App* solve = app.add_subcommand("solve", "decide satisfiability");
    solve->add_option("--frames", frames, "comma-separated frame classes");
    solve->add_option("--input", input, "formula file")->required();
    solve->add_option("--model-out", model_out, "write a SAT model here");
    solve->add_option("--cap", cap, "model size cap for bounded searches");
    solve->add_option("--seed", seed, "search shuffle seed");

    CLI::App* check = app.add_subcommand("check", "model-check a formula");
    check->add_option("--model", model_path, "model JSON file")->required();
    check->add_option("--input", input, "formula file")->required();
    check->add_option("--world", world, "world id (default: designated)");

    CLI::App* nf = app.add_subcommand("nf", "print the normal form");
    nf->add_option("--input", input, "formula file")->required();

    CLI::App* c1 = app.add_subcommand("c1", "print the counting translation");
    c1->add_option("--frames", frames, "comma-separated frame classes");
    c1->add_option("--input", input, "formula file")->required();

    CLI::App* minimize = app.add_subcommand("minimize", "shrink a model");
    minimize->add_option("--model", model_path, "model JSON file")->required();
    minimize->add_option("--input", input, "formula file")->required();
    minimize->add_option("--model-out", model_out,
                         "output path (default: stdout)");

    CLI::App* tiling = app.add_subcommand("tiling-gen",
                                          "emit a tiling reduction formula");
    tiling->add_option("--tiling", tiling_path, "tiling instance JSON")
        ->required();

    CLI::App* oracle = app.add_subcommand("oracle", "bounded brute force");
    oracle->add_option("--frames", frames, "comma-separated frame classes");
    oracle->add_option("--input", input, "formula file")->required();
    oracle->add_option("--max-size", max_size, "exhaustive size bound");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitError;
    }

    try {
        if (solve->parsed())
            return cmd_solve(frames, input, model_out, cap, seed);
        if (check->parsed()) return cmd_check(model_path, input, world);
        if (nf->parsed()) return cmd_nf(input);
        if (c1->parsed()) return cmd_c1(frames, input);
        if (minimize->parsed())
            return cmd_minimize(model_path, input, model_out);
        if (tiling->parsed()) return cmd_tiling_gen(tiling_path);
        if (oracle->parsed()) return cmd_oracle(frames, input, max_size);
    } catch (const Fatal& e) {
        std::cerr << "error: " << e.message << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
