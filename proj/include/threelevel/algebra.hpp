#pragma once

// SU(3) generators in the Gell-Mann and ladder bases, and the expansion of
// arbitrary 3x3 complex matrices in the ladder basis {I, a3, a+, a-, c3, c+,
// c-, b+, b-}.

#include <array>
#include <complex>
#include <string_view>

#include <Eigen/Dense>

namespace threelevel {

using Complex = std::complex<double>;
using Matrix3 = Eigen::Matrix3cd;

inline constexpr Complex kI{0.0, 1.0};

// Canonical coefficient order, used by LadderCoefficients everywhere.
enum class GeneratorId : int {
    IDENTITY = 0,
    A3,
    APLUS,
    AMINUS,
    C3,
    CPLUS,
    CMINUS,
    BPLUS,
    BMINUS,
};

inline constexpr std::array<GeneratorId, 9> kAllGenerators = {
    GeneratorId::IDENTITY, GeneratorId::A3,     GeneratorId::APLUS,
    GeneratorId::AMINUS,   GeneratorId::C3,     GeneratorId::CPLUS,
    GeneratorId::CMINUS,   GeneratorId::BPLUS,  GeneratorId::BMINUS,
};

// The eight traceless ladder generators (everything except IDENTITY).
inline constexpr std::array<GeneratorId, 8> kLadderGenerators = {
    GeneratorId::A3,    GeneratorId::APLUS,  GeneratorId::AMINUS, GeneratorId::C3,
    GeneratorId::CPLUS, GeneratorId::CMINUS, GeneratorId::BPLUS,  GeneratorId::BMINUS,
};

std::string_view generator_name(GeneratorId id);

// Weights of {I, a3, a+, a-, c3, c+, c-, b+, b-} for a 3x3 matrix.
struct LadderCoefficients {
    std::array<Complex, 9> h{};

    Complex& operator[](GeneratorId id) { return h[static_cast<std::size_t>(id)]; }
    const Complex& operator[](GeneratorId id) const {
        return h[static_cast<std::size_t>(id)];
    }

    Complex& id() { return (*this)[GeneratorId::IDENTITY]; }
    Complex& a3() { return (*this)[GeneratorId::A3]; }
    Complex& ap() { return (*this)[GeneratorId::APLUS]; }
    Complex& am() { return (*this)[GeneratorId::AMINUS]; }
    Complex& c3() { return (*this)[GeneratorId::C3]; }
    Complex& cp() { return (*this)[GeneratorId::CPLUS]; }
    Complex& cm() { return (*this)[GeneratorId::CMINUS]; }
    Complex& bp() { return (*this)[GeneratorId::BPLUS]; }
    Complex& bm() { return (*this)[GeneratorId::BMINUS]; }
    Complex id() const { return (*this)[GeneratorId::IDENTITY]; }
    Complex a3() const { return (*this)[GeneratorId::A3]; }
    Complex ap() const { return (*this)[GeneratorId::APLUS]; }
    Complex am() const { return (*this)[GeneratorId::AMINUS]; }
    Complex c3() const { return (*this)[GeneratorId::C3]; }
    Complex cp() const { return (*this)[GeneratorId::CPLUS]; }
    Complex cm() const { return (*this)[GeneratorId::CMINUS]; }
    Complex bp() const { return (*this)[GeneratorId::BPLUS]; }
    Complex bm() const { return (*this)[GeneratorId::BMINUS]; }

    LadderCoefficients& operator+=(const LadderCoefficients& o) {
        for (std::size_t k = 0; k < h.size(); ++k) h[k] += o.h[k];
        return *this;
    }
    friend LadderCoefficients operator+(LadderCoefficients a, const LadderCoefficients& b) {
        return a += b;
    }
    friend LadderCoefficients operator*(Complex s, LadderCoefficients a) {
        for (auto& x : a.h) x *= s;
        return a;
    }
    bool operator==(const LadderCoefficients&) const = default;
};

// Gell-Mann matrix lambda_index, index in 1..8. Throws std::invalid_argument
// otherwise.
Matrix3 gell_mann(int index);

// Ladder generator. Off-diagonal generators are elementary matrices:
// a+ = E23, a- = E32, b+ = E21, b- = E12, c+ = E13, c- = E31;
// a3 = diag(0,1,-1), c3 = diag(1,0,-1).
Matrix3 ladder(GeneratorId id);

Matrix3 commutator(const Matrix3& a, const Matrix3& b);

LadderCoefficients decompose(const Matrix3& m);
Matrix3 reconstruct(const LadderCoefficients& c);

bool is_hermitian(const Matrix3& m, double tol = 1e-12);
bool is_traceless(const Matrix3& m, double tol = 1e-12);

// One entry of the commutator table: [row, col] = sum of weighted generators.
struct CommutatorEntry {
    GeneratorId row;
    GeneratorId col;
    LadderCoefficients value;
};

// The 64 published commutators [O_i, O_j] among the eight ladder generators,
// stored as data so they can be checked against the constructed matrices.
const std::array<CommutatorEntry, 64>& commutator_table();

}  // namespace threelevel
