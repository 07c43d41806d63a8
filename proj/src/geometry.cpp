#include "spectra/geometry.hpp"

#include <array>
#include <stdexcept>

namespace spectra {

namespace {

// Continuant matrix of a digit word: M(a_1)...M(a_n) with M(a) = [[0,1],[1,a]]
// equals [[p_(n-1), p_n], [q_(n-1), q_n]].
std::array<Integer, 4> continuant_matrix(const Word& w) {
    std::array<Integer, 4> m{1, 0, 0, 1};
    for (Letter a : w.letters()) {
        long d = a + 1;
        // right-multiply by [[0,1],[1,d]]
        Integer m12 = m[0] + d * m[1];
        Integer m22 = m[2] + d * m[3];
        m[0] = m[1];
        m[1] = m12;
        m[2] = m[3];
        m[3] = m22;
    }
    return m;
}

Word side_word(const Word& w, Side side) {
    return side == Side::unstable ? w : transpose(w);
}

Rational cf_size_from_matrix(const std::array<Integer, 4>& m) {
    // size = 1/(q_n (q_n + q_(n-1)))
    Rational s(Integer(1), m[3] * (m[3] + m[2]));
    s.canonicalize();
    return s;
}

Enclosure branch_cylinder(const Word& w, const CantorModel& model) {
    if (!is_admissible(w, model.transitions()))
        throw std::invalid_argument("cylinder: word not admissible");
    Enclosure iv = model.base_interval(w.back());
    for (size_t i = w.size(); i-- > 1;)
        iv = model.branch(w[i - 1], w[i]).image(iv);
    return iv;
}

}  // namespace

Continuants continuants(const Word& w, const CantorModel& model) {
    if (!model.is_cf())
        throw std::domain_error("continuants: model kind is not continued-fraction");
    if (w.empty()) throw std::invalid_argument("continuants: empty word");
    auto m = continuant_matrix(w);
    return Continuants{Rational(m[1]), Rational(m[3]), Rational(m[2])};
}

Enclosure cylinder_interval(const Word& w, const CantorModel& model, Side side) {
    Word v = side_word(w, side);
    if (!is_admissible(v, model.transitions()))
        throw std::invalid_argument("cylinder_interval: word not admissible on this side");
    if (!model.is_cf()) return branch_cylinder(v, model);
    // Endpoints [0; a_1..a_n] = p/q and [0; a_1..a_n + 1] = (p+p')/(q+q').
    auto m = continuant_matrix(v);
    Rational x(m[1], m[3]);
    Rational y(m[0] + m[1], m[2] + m[3]);
    x.canonicalize();
    y.canonicalize();
    return {std::min(x, y), std::max(x, y)};
}

Rational cylinder_size(const Word& w, const CantorModel& model, Side side) {
    Word v = side_word(w, side);
    if (!is_admissible(v, model.transitions()))
        throw std::invalid_argument("cylinder_size: word not admissible on this side");
    if (!model.is_cf()) {
        Enclosure iv = branch_cylinder(v, model);
        return iv.hi - iv.lo;
    }
    return cf_size_from_matrix(continuant_matrix(v));
}

long scale(const Word& w, const CantorModel& model, Side side) {
    return floor_neg_log(cylinder_size(w, model, side));
}

CylinderWalker::CylinderWalker(const CantorModel& model, Side side)
    : model_(&model), side_(side) {
    if (side == Side::stable && !model.supports_stable())
        throw std::invalid_argument("stable side needs a CF model or symmetric transitions");
    if (model.is_cf()) cf_stack_.push_back({Integer(1), Integer(0), Integer(0), Integer(1)});
}

void CylinderWalker::push(Letter a) {
    if (!word_.empty() && !model_->transitions().allowed(word_.back(), a))
        throw std::invalid_argument("CylinderWalker: inadmissible extension");
    word_.push_back(a);
    if (model_->is_cf()) {
        // Appending to w appends to the effective word on the unstable side
        // and prepends on the stable side (effective word = transpose(w)).
        auto m = cf_stack_.back();
        long d = a + 1;
        if (side_ == Side::unstable) {
            Integer m12 = m[0] + d * m[1];
            Integer m22 = m[2] + d * m[3];
            m = {m[1], m12, m[3], m22};
        } else {
            // left-multiply by [[0,1],[1,d]]
            Integer n11 = m[2], n12 = m[3];
            Integer n21 = m[0] + d * m[2], n22 = m[1] + d * m[3];
            m = {n11, n12, n21, n22};
        }
        cf_stack_.push_back(std::move(m));
    } else {
        iv_stack_.push_back(branch_cylinder(side_word(word_, side_), *model_));
    }
}

void CylinderWalker::pop() {
    word_.pop_back();
    if (model_->is_cf())
        cf_stack_.pop_back();
    else
        iv_stack_.pop_back();
}

Rational CylinderWalker::size() const {
    if (word_.empty()) throw std::logic_error("CylinderWalker: empty word has no size");
    if (model_->is_cf()) return cf_size_from_matrix(cf_stack_.back());
    return iv_stack_.back().hi - iv_stack_.back().lo;
}

ScaleFamily scale_family(long r, const CantorModel& model,
                         const std::function<bool(const Word&)>& keep, Side side) {
    if (r < 0) throw std::invalid_argument("scale_family: r must be >= 0");
    ScaleFamily fam;
    fam.r = r;
    CylinderWalker walk(model, side);
    const auto& T = model.transitions();
    std::function<void()> rec = [&]() {
        if (keep && !keep(walk.word())) return;
        if (walk.scale() >= r) {
            fam.words.push_back(walk.word());
            return;
        }
        for (Letter b : T.successors(walk.word().back())) {
            walk.push(b);
            rec();
            walk.pop();
        }
    };
    for (int a = 0; a < T.alphabet_size(); ++a) {
        walk.push(static_cast<Letter>(a));
        rec();
        walk.pop();
    }
    return fam;
}

ScaleFamily scale_family(long r, const CantorModel& model, Side side) {
    return scale_family(r, model, nullptr, side);
}

namespace {

// Track the extremal ratio exactly; one log at the end gives the enclosure.
struct MaxLogRatio {
    Rational worst = 1;  // max of max(ratio, 1/ratio)
    void feed(const Rational& ratio) {
        Rational inv = 1 / ratio;
        const Rational& m = ratio > inv ? ratio : inv;
        if (m > worst) worst = m;
    }
    Enclosure value() const { return log_enclosure(worst); }
};

std::vector<Word> all_admissible_words(const CantorModel& model, int max_len) {
    std::vector<Word> out;
    enumerate_admissible(
        model.transitions(),
        [](const Word&) { return true; },
        [&](const Word& w) { return static_cast<int>(w.size()) < max_len; },
        [&](const Word& w) {
            out.push_back(w);
            return true;
        });
    return out;
}

}  // namespace

Enclosure distortion_constant(const CantorModel& model, int sample_depth) {
    if (sample_depth < 2) throw std::invalid_argument("distortion_constant: sample_depth < 2");
    auto words = all_admissible_words(model, sample_depth - 1);
    MaxLogRatio acc;
    const auto& T = model.transitions();
    for (const auto& a : words) {
        Rational sa = cylinder_size(a, model);
        for (const auto& b : words) {
            if (static_cast<int>(a.size() + b.size()) > sample_depth) continue;
            if (!T.allowed(a.back(), b.front())) continue;
            Rational sab = cylinder_size(concat(a, b, T), model);
            acc.feed(sab / (sa * cylinder_size(b, model)));
        }
    }
    return acc.value();
}

Enclosure symmetry_constant(const CantorModel& model, int sample_depth) {
    if (!model.supports_stable())
        throw std::invalid_argument("symmetry_constant: model has no stable side");
    auto words = all_admissible_words(model, sample_depth);
    MaxLogRatio acc;
    for (const auto& w : words)
        acc.feed(cylinder_size(w, model, Side::unstable) /
                 cylinder_size(w, model, Side::stable));
    return acc.value();
}

}  // namespace spectra
