#include "gmlsat.h"

#include "core/formula.hpp"
#include "core/kripke.hpp"
#include "core/minimize.hpp"
#include "core/model_io.hpp"
#include "core/normal_form.hpp"
#include "core/c1.hpp"
#include "core/solver.hpp"
#include "core/tiling.hpp"

#include <cstring>
#include <new>
#include <string>

struct gmlsat_formula {
    gml::FormulaPtr f;
};

struct gmlsat_model {
    gml::PointedStructure m;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
int guarded(Fn fn) {
    try {
        fn();
        return GMLSAT_OK;
    } catch (const gml::ParseError& e) {
        g_last_error = e.what();
        return GMLSAT_ERR_PARSE;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return GMLSAT_ERR_INVALID;
    } catch (const std::length_error& e) {
        g_last_error = e.what();
        return GMLSAT_ERR_RESOURCE;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return GMLSAT_ERR_RESOURCE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GMLSAT_ERR_INTERNAL;
    }
}

gml::FrameSet frames_from_mask(unsigned mask) {
    if (mask > 31u) throw std::invalid_argument("unknown frame class bit");
    return gml::FrameSet::from_mask(mask);
}

}  // namespace

extern "C" {

const char* gmlsat_last_error(void) { return g_last_error.c_str(); }

const char* gmlsat_version(void) { return "0.1.0"; }

void gmlsat_string_free(char* s) { delete[] s; }

int gmlsat_formula_parse(const char* text, gmlsat_formula** out) {
    return guarded([&] {
        if (!text || !out) throw std::invalid_argument("null argument");
        *out = new gmlsat_formula{gml::parse(text)};
    });
}

void gmlsat_formula_free(gmlsat_formula* f) { delete f; }

int gmlsat_formula_render(const gmlsat_formula* f, char** out) {
    return guarded([&] {
        if (!f || !out) throw std::invalid_argument("null argument");
        *out = dup_string(gml::render(f->f));
    });
}

int gmlsat_formula_size(const gmlsat_formula* f, uint64_t* out) {
    return guarded([&] {
        if (!f || !out) throw std::invalid_argument("null argument");
        *out = gml::formula_size(f->f);
    });
}

int gmlsat_formula_normal_form(const gmlsat_formula* f, gmlsat_formula** out) {
    return guarded([&] {
        if (!f || !out) throw std::invalid_argument("null argument");
        *out = new gmlsat_formula{gml::nf::to_formula(gml::nf::normalize(f->f))};
    });
}

int gmlsat_formula_c1(const gmlsat_formula* f, unsigned frames, char** out) {
    return guarded([&] {
        if (!f || !out) throw std::invalid_argument("null argument");
        gml::c1::Alpha a = gml::c1::build_alpha(f->f, frames_from_mask(frames));
        *out = dup_string(gml::c1::render_c1(a.sentence));
    });
}

int gmlsat_model_from_json(const char* json, gmlsat_model** out) {
    return guarded([&] {
        if (!json || !out) throw std::invalid_argument("null argument");
        try {
            *out = new gmlsat_model{gml::model_from_json(json)};
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            throw std::invalid_argument(e.what());  // JSON syntax errors
        }
    });
}

int gmlsat_model_to_json(const gmlsat_model* m, char** out) {
    return guarded([&] {
        if (!m || !out) throw std::invalid_argument("null argument");
        *out = dup_string(gml::model_to_json(m->m));
    });
}

int gmlsat_model_to_dot(const gmlsat_model* m, char** out) {
    return guarded([&] {
        if (!m || !out) throw std::invalid_argument("null argument");
        *out = dup_string(gml::model_to_dot(m->m));
    });
}

void gmlsat_model_free(gmlsat_model* m) { delete m; }

int gmlsat_model_world_count(const gmlsat_model* m, uint32_t* out) {
    return guarded([&] {
        if (!m || !out) throw std::invalid_argument("null argument");
        *out = static_cast<uint32_t>(m->m.structure.world_count());
    });
}

int gmlsat_model_check(const gmlsat_model* m, const char* world,
                       const gmlsat_formula* f, int* out_truth) {
    return guarded([&] {
        if (!m || !f || !out_truth) throw std::invalid_argument("null argument");
        bool truth = world ? gml::check(m->m.structure, world, f->f)
                           : gml::check(m->m, f->f);
        *out_truth = truth ? 1 : 0;
    });
}

int gmlsat_model_frame_properties(const gmlsat_model* m, unsigned* out_frames) {
    return guarded([&] {
        if (!m || !out_frames) throw std::invalid_argument("null argument");
        *out_frames = gml::frame_properties(m->m.structure).mask();
    });
}

int gmlsat_solve(const gmlsat_formula* f, unsigned frames, uint32_t cap,
                 uint64_t seed, int* out_verdict, gmlsat_model** model_out,
                 char** reason_out) {
    return guarded([&] {
        if (!f || !out_verdict) throw std::invalid_argument("null argument");
        gml::solver::SolverOptions opts;
        if (cap) opts.cap = static_cast<int>(cap);
        opts.seed = seed;
        gml::solver::Verdict v =
            gml::solver::decide(f->f, frames_from_mask(frames), opts);
        switch (v.kind) {
            case gml::solver::Verdict::Kind::Sat:
                *out_verdict = GMLSAT_SAT;
                if (model_out)
                    *model_out = new gmlsat_model{std::move(*v.model)};
                break;
            case gml::solver::Verdict::Kind::Unsat:
                *out_verdict = GMLSAT_UNSAT;
                break;
            case gml::solver::Verdict::Kind::Unknown:
                *out_verdict = GMLSAT_UNKNOWN;
                if (reason_out) *reason_out = dup_string(v.reason);
                break;
        }
    });
}

int gmlsat_oracle(const gmlsat_formula* f, unsigned frames, uint32_t max_size,
                  int* out_verdict, gmlsat_model** model_out) {
    return guarded([&] {
        if (!f || !out_verdict) throw std::invalid_argument("null argument");
        gml::solver::BruteResult res = gml::solver::brute_force(
            f->f, frames_from_mask(frames), static_cast<int>(max_size));
        if (res.model) {
            *out_verdict = GMLSAT_SAT;
            if (model_out)
                *model_out = new gmlsat_model{std::move(*res.model)};
        } else {
            *out_verdict = GMLSAT_UNKNOWN;
        }
    });
}

int gmlsat_minimize(const gmlsat_model* m, const gmlsat_formula* f,
                    gmlsat_model** out) {
    return guarded([&] {
        if (!m || !f || !out) throw std::invalid_argument("null argument");
        gml::nf::NormalForm nf = gml::nf::normalize(f->f);
        gml::PointedStructure expanded = gml::nf::expand_guards(m->m, nf);
        gml::PointedStructure small = gml::minimize::minimize(expanded, nf);
        small.structure = gml::restrict_letters(small.structure,
                                                gml::letters(f->f));
        *out = new gmlsat_model{std::move(small)};
    });
}

int gmlsat_tiling_reduction(const char* tiling_json, gmlsat_formula** out) {
    return guarded([&] {
        if (!tiling_json || !out) throw std::invalid_argument("null argument");
        gml::tiling::TilingInstance inst;
        try {
            inst = gml::tiling::instance_from_json(tiling_json);
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& e) {
            throw std::invalid_argument(e.what());
        }
        *out = new gmlsat_formula{gml::tiling::reduction(inst)};
    });
}

}  // extern "C"
