#include "threelevel/algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace threelevel {

namespace {

Matrix3 elementary(int row, int col) {
    Matrix3 m = Matrix3::Zero();
    m(row - 1, col - 1) = 1.0;
    return m;
}

struct Term {
    double weight;
    GeneratorId id;
};

LadderCoefficients combo(std::initializer_list<Term> terms) {
    LadderCoefficients c;
    for (const auto& t : terms) c[t.id] += t.weight;
    return c;
}

}  // namespace

std::string_view generator_name(GeneratorId id) {
    switch (id) {
        case GeneratorId::IDENTITY: return "I";
        case GeneratorId::A3: return "a3";
        case GeneratorId::APLUS: return "a+";
        case GeneratorId::AMINUS: return "a-";
        case GeneratorId::C3: return "c3";
        case GeneratorId::CPLUS: return "c+";
        case GeneratorId::CMINUS: return "c-";
        case GeneratorId::BPLUS: return "b+";
        case GeneratorId::BMINUS: return "b-";
    }
    return "?";
}

Matrix3 gell_mann(int index) {
    Matrix3 m = Matrix3::Zero();
    switch (index) {
        case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case 2: m(0, 1) = -kI; m(1, 0) = kI; break;
        case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        case 4: m(0, 2) = 1.0; m(2, 0) = 1.0; break;
        case 5: m(0, 2) = -kI; m(2, 0) = kI; break;
        case 6: m(1, 2) = 1.0; m(2, 1) = 1.0; break;
        case 7: m(1, 2) = -kI; m(2, 1) = kI; break;
        case 8: {
            const double s = 1.0 / std::sqrt(3.0);
            m(0, 0) = s; m(1, 1) = s; m(2, 2) = -2.0 * s;
            break;
        }
        default:
            throw std::invalid_argument("gell_mann: index must be in 1..8, got " +
                                        std::to_string(index));
    }
    return m;
}

Matrix3 ladder(GeneratorId id) {
    switch (id) {
        case GeneratorId::IDENTITY: return Matrix3::Identity();
        case GeneratorId::A3: return Matrix3(Eigen::Vector3cd(0.0, 1.0, -1.0).asDiagonal());
        case GeneratorId::APLUS: return elementary(2, 3);
        case GeneratorId::AMINUS: return elementary(3, 2);
        case GeneratorId::C3: return Matrix3(Eigen::Vector3cd(1.0, 0.0, -1.0).asDiagonal());
        case GeneratorId::CPLUS: return elementary(1, 3);
        case GeneratorId::CMINUS: return elementary(3, 1);
        case GeneratorId::BPLUS: return elementary(2, 1);
        case GeneratorId::BMINUS: return elementary(1, 2);
    }
    throw std::invalid_argument("ladder: unknown generator");
}

Matrix3 commutator(const Matrix3& a, const Matrix3& b) { return a * b - b * a; }

LadderCoefficients decompose(const Matrix3& m) {
    // Diagonal: d = h_id (1,1,1) + h_a3 (0,1,-1) + h_c3 (1,0,-1).
    LadderCoefficients c;
    const Complex hid = (m(0, 0) + m(1, 1) + m(2, 2)) / 3.0;
    c.id() = hid;
    c.a3() = m(1, 1) - hid;
    c.c3() = m(0, 0) - hid;
    c.ap() = m(1, 2);
    c.am() = m(2, 1);
    c.cp() = m(0, 2);
    c.cm() = m(2, 0);
    c.bp() = m(1, 0);
    c.bm() = m(0, 1);
    return c;
}

Matrix3 reconstruct(const LadderCoefficients& c) {
    Matrix3 m;
    m(0, 0) = c.id() + c.c3();
    m(1, 1) = c.id() + c.a3();
    m(2, 2) = c.id() - c.a3() - c.c3();
    m(1, 2) = c.ap();
    m(2, 1) = c.am();
    m(0, 2) = c.cp();
    m(2, 0) = c.cm();
    m(1, 0) = c.bp();
    m(0, 1) = c.bm();
    return m;
}

bool is_hermitian(const Matrix3& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_traceless(const Matrix3& m, double tol) { return std::abs(m.trace()) <= tol; }

const std::array<CommutatorEntry, 64>& commutator_table() {
    using G = GeneratorId;
    static const std::array<CommutatorEntry, 64> table = [] {
        const std::array<std::array<LadderCoefficients, 8>, 8> rows = {{
            // a3
            {combo({}), combo({{2, G::APLUS}}), combo({{-2, G::AMINUS}}), combo({}),
             combo({{1, G::CPLUS}}), combo({{-1, G::CMINUS}}), combo({{1, G::BPLUS}}),
             combo({{-1, G::BMINUS}})},
            // a+
            {combo({{-2, G::APLUS}}), combo({}), combo({{1, G::A3}}), combo({{-1, G::APLUS}}),
             combo({}), combo({{1, G::BPLUS}}), combo({}), combo({{-1, G::CPLUS}})},
            // a-
            {combo({{2, G::AMINUS}}), combo({{-1, G::A3}}), combo({}), combo({{1, G::AMINUS}}),
             combo({{-1, G::BMINUS}}), combo({}), combo({{1, G::CMINUS}}), combo({})},
            // c3
            {combo({}), combo({{1, G::APLUS}}), combo({{-1, G::AMINUS}}), combo({}),
             combo({{2, G::CPLUS}}), combo({{-2, G::CMINUS}}), combo({{-1, G::BPLUS}}),
             combo({{1, G::BMINUS}})},
            // c+
            {combo({{-1, G::CPLUS}}), combo({}), combo({{1, G::BMINUS}}),
             combo({{-2, G::CPLUS}}), combo({}), combo({{1, G::C3}}), combo({{-1, G::APLUS}}),
             combo({})},
            // c-
            {combo({{1, G::CMINUS}}), combo({{-1, G::BPLUS}}), combo({}),
             combo({{2, G::CMINUS}}), combo({{-1, G::C3}}), combo({}), combo({}),
             combo({{1, G::AMINUS}})},
            // b+
            {combo({{-1, G::BPLUS}}), combo({}), combo({{-1, G::CMINUS}}),
             combo({{1, G::BPLUS}}), combo({{1, G::APLUS}}), combo({}), combo({}),
             combo({{1, G::A3}, {-1, G::C3}})},
            // b-
            {combo({{1, G::BMINUS}}), combo({{1, G::CPLUS}}), combo({}),
             combo({{-1, G::BMINUS}}), combo({}), combo({{-1, G::AMINUS}}),
             combo({{1, G::C3}, {-1, G::A3}}), combo({})},
        }};
        std::array<CommutatorEntry, 64> out{};
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j)
                out[8 * i + j] = {kLadderGenerators[i], kLadderGenerators[j], rows[i][j]};
        return out;
    }();
    return table;
}

}  // namespace threelevel
