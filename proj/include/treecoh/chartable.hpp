#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "treecoh/group.hpp"
#include "treecoh/ring.hpp"

namespace treecoh {

// The classical character table of the projective linear group over the
// residue field, exposed as value-on-matrix formulas so characters can be
// evaluated on reductions of deeper-level matrices (inflation).
//
// Irreducibles, q odd:
//   triv, sgn              dimension 1
//   st, st_sgn             dimension q, q
//   ps_j, 1 <= j <= (q-3)/2    principal series, dimension q+1
//   cusp_j, 1 <= j <= (q-1)/2  cuspidal, dimension q-1
class PglCharTable {
  public:
    enum class Kind { Trivial, Sign, Steinberg, SteinbergSign, PrincipalSeries, Cuspidal };

    explicit PglCharTable(const GaloisRing& F)
        : F_(F.p(), F.f(), 1), F2_(F.p(), 2 * F.f(), 1) {
        root_ = subfield_root(F_, F2_);
        q_ = F_.q();
        labels_ = {"triv", "sgn", "st", "st_sgn"};
        kinds_ = {Kind::Trivial, Kind::Sign, Kind::Steinberg, Kind::SteinbergSign};
        params_ = {0, 0, 0, 0};
        for (std::int64_t j = 1; j <= (q_ - 3) / 2; ++j) {
            labels_.push_back("ps_" + std::to_string(j));
            kinds_.push_back(Kind::PrincipalSeries);
            params_.push_back(j);
        }
        for (std::int64_t j = 1; j <= (q_ - 1) / 2; ++j) {
            labels_.push_back("cusp_" + std::to_string(j));
            kinds_.push_back(Kind::Cuspidal);
            params_.push_back(j);
        }
    }

    const GaloisRing& field() const { return F_; }
    std::int64_t q() const { return q_; }
    int count() const { return (int)labels_.size(); }
    const std::string& label(int i) const { return labels_.at(i); }
    Kind kind(int i) const { return kinds_.at(i); }
    std::int64_t parameter(int i) const { return params_.at(i); }
    int index_of(const std::string& label) const {
        for (int i = 0; i < count(); ++i)
            if (labels_[i] == label) return i;
        throw std::domain_error("chartable: unknown label " + label);
    }

    std::int64_t dim(int i) const {
        switch (kinds_.at(i)) {
            case Kind::Trivial:
            case Kind::Sign: return 1;
            case Kind::Steinberg:
            case Kind::SteinbergSign: return q_;
            case Kind::PrincipalSeries: return q_ + 1;
            case Kind::Cuspidal: return q_ - 1;
        }
        throw std::logic_error("chartable: bad kind");
    }

    // element classification over the residue field
    enum class Shape { Central, Parabolic, Split, Elliptic };

    Shape shape(const PglMat& g) const {
        const auto m = pgl_decode(F_, g);
        if (F_.is_zero(m[1]) && F_.is_zero(m[2]) && F_.eq(m[0], m[3])) return Shape::Central;
        const int fp = fixed_point_count(g);
        if (fp == 1) return Shape::Parabolic;
        if (fp == 2) return Shape::Split;
        if (fp == 0) return Shape::Elliptic;
        throw std::logic_error("chartable: non-central element fixing the whole line");
    }

    int fixed_point_count(const PglMat& g) const {
        int f = 0;
        for (const auto& pt : projective_line(F_)) f += (pgl_act_point(F_, g, pt) == pt);
        return f;
    }

    cx value(int i, const PglMat& g) const {
        const Kind k = kinds_.at(i);
        const std::int64_t j = params_.at(i);
        const auto m = pgl_decode(F_, g);
        const RElt det = F_.sub(F_.mul(m[0], m[3]), F_.mul(m[1], m[2]));
        const double sign = F_.is_square_in_residue(det) ? 1.0 : -1.0;
        switch (k) {
            case Kind::Trivial: return 1.0;
            case Kind::Sign: return sign;
            case Kind::Steinberg: return (double)(fixed_point_count(g) - 1);
            case Kind::SteinbergSign: return sign * (double)(fixed_point_count(g) - 1);
            case Kind::PrincipalSeries: {
                switch (shape(g)) {
                    case Shape::Central: return (double)(q_ + 1);
                    case Shape::Parabolic: return 1.0;
                    case Shape::Elliptic: return 0.0;
                    case Shape::Split: {
                        const std::int64_t e = F_.dlog(split_ratio(m, det));
                        return root_of_unity(q_ - 1, j * e) + root_of_unity(q_ - 1, -j * e);
                    }
                }
                break;
            }
            case Kind::Cuspidal: {
                switch (shape(g)) {
                    case Shape::Central: return (double)(q_ - 1);
                    case Shape::Parabolic: return -1.0;
                    case Shape::Split: return 0.0;
                    case Shape::Elliptic: {
                        const std::int64_t e = F2_.dlog(elliptic_eigenvalue(m, det));
                        const std::int64_t n = q_ * q_ - 1;
                        const std::int64_t a = (q_ - 1) * j % n;
                        return -(root_of_unity(n, a * e % n) + root_of_unity(n, a * e % n * q_ % n));
                    }
                }
                break;
            }
        }
        throw std::logic_error("chartable: unreachable");
    }

    ClassFunction as_class_function(int i, const FiniteGroup<PglMat>& G) const {
        ClassFunction out;
        for (int c = 0; c < G.class_count(); ++c) out.v.push_back(value(i, G.at(G.class_rep(c))));
        return out;
    }

  private:
    // ratio of the two residue eigenvalues of a split element
    RElt split_ratio(const std::array<RElt, 4>& m, const RElt& det) const {
        const RElt tr = F_.add(m[0], m[3]);
        std::vector<RElt> roots;
        for (std::int64_t x = 0; x < F_.order(); ++x) {
            const RElt xe = F_.decode(x);
            const RElt v = F_.add(F_.sub(F_.mul(xe, xe), F_.mul(tr, xe)), det);
            if (F_.is_zero(v)) roots.push_back(xe);
        }
        if (roots.size() != 2) throw std::logic_error("chartable: split element without two roots");
        return F_.mul(roots[0], F_.inv(roots[1]));
    }

    // an eigenvalue of an elliptic element, in the quadratic extension
    RElt elliptic_eigenvalue(const std::array<RElt, 4>& m, const RElt& det) const {
        const RElt tr2 = embed_element(F_, F_.add(m[0], m[3]), F2_, root_);
        const RElt det2 = embed_element(F_, det, F2_, root_);
        for (std::int64_t x = 1; x < F2_.order(); ++x) {
            const RElt xe = F2_.decode(x);
            const RElt v = F2_.add(F2_.sub(F2_.mul(xe, xe), F2_.mul(tr2, xe)), det2);
            if (F2_.is_zero(v)) return xe;
        }
        throw std::logic_error("chartable: elliptic element without an extension eigenvalue");
    }

    GaloisRing F_;
    GaloisRing F2_;
    RElt root_;
    std::int64_t q_ = 0;
    std::vector<std::string> labels_;
    std::vector<Kind> kinds_;
    std::vector<std::int64_t> params_;
};

}  // namespace treecoh
