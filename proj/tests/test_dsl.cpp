#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "priorlab/dsl.hpp"

using namespace priorlab;
using dsl::Binding;
using dsl::evaluate;
using dsl::parse;
using dsl::pretty_print;

namespace {

double eval(const std::string& src, const Binding& b = {}) { return evaluate(parse(src), b); }

}  // namespace

TEST_CASE("arithmetic and precedence") {
    CHECK(eval("1 + 2 * 3") == 7.0);
    CHECK(eval("(1 + 2) * 3") == 9.0);
    CHECK(eval("2 - 3 - 4") == -5.0);      // left associative
    CHECK(eval("12 / 3 / 2") == 2.0);
    CHECK(eval("2 ^ 3 ^ 2") == 512.0);     // right associative
    CHECK(eval("-2 ^ 2") == -4.0);         // unary minus applies to the whole power
    CHECK(eval("2 ^ -1") == 0.5);
    CHECK(eval("--3") == 3.0);
    CHECK(eval("1.5e2") == 150.0);
    CHECK(eval(".5 + 1") == 1.5);
}

TEST_CASE("comparisons and indicator") {
    CHECK(eval("1 < 2") == 1.0);
    CHECK(eval("2 <= 2") == 1.0);
    CHECK(eval("2 > 3") == 0.0);
    CHECK(eval("3 >= 3") == 1.0);
    CHECK(eval("indicator(2 > 1)") == 1.0);
    CHECK(eval("indicator(0)") == 0.0);
    CHECK(eval("indicator(theta >= 0) * theta", {{"theta", 3.0}}) == 3.0);
    CHECK(eval("indicator(theta >= 0) * theta", {{"theta", -3.0}}) == 0.0);
}

TEST_CASE("functions and constants") {
    CHECK_THAT(eval("exp(1)"), Catch::Matchers::WithinRel(std::exp(1.0), 1e-15));
    CHECK_THAT(eval("log(e)"), Catch::Matchers::WithinAbs(1.0, 1e-15));
    CHECK_THAT(eval("sqrt(2)"), Catch::Matchers::WithinRel(std::sqrt(2.0), 1e-15));
    CHECK(eval("abs(-4)") == 4.0);
    CHECK_THAT(eval("gamma_fn(5)"), Catch::Matchers::WithinRel(24.0, 1e-12));
    CHECK_THAT(eval("gamma_fn(0.5)"), Catch::Matchers::WithinRel(std::sqrt(M_PI), 1e-12));
    CHECK(eval("factorial(5)") == 120.0);
    CHECK_THAT(eval("pi"), Catch::Matchers::WithinRel(M_PI, 1e-15));
    CHECK_THAT(eval("2*pi"), Catch::Matchers::WithinRel(2.0 * M_PI, 1e-15));
}

TEST_CASE("variables and bindings") {
    Binding b{{"theta", 2.0}, {"n", 10.0}};
    CHECK(eval("theta * n", b) == 20.0);
    CHECK_THAT(eval("exp(-theta*theta/(2*n*n))/(sqrt(2*pi)*n)", b),
               Catch::Matchers::WithinRel(
                   std::exp(-4.0 / 200.0) / (std::sqrt(2.0 * M_PI) * 10.0), 1e-14));
    CHECK_THROWS_AS(eval("theta", {}), dsl::UnboundVariableError);
}

TEST_CASE("free_variables") {
    auto fv = dsl::free_variables(parse("exp(theta) * n + x / theta"));
    CHECK(fv == std::set<std::string>{"theta", "n", "x"});
    CHECK(dsl::free_variables(parse("pi + e + 2")).empty());
}

TEST_CASE("syntax errors carry offsets") {
    try {
        parse("exp(theta");
        FAIL("expected SyntaxError");
    } catch (const dsl::SyntaxError& e) {
        CHECK(e.offset == 9);
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("offset 9"));
    }
    try {
        parse("1 + ");
        FAIL("expected SyntaxError");
    } catch (const dsl::SyntaxError& e) {
        CHECK(e.offset == 4);
    }
    try {
        parse("2 $ 3");
        FAIL("expected SyntaxError");
    } catch (const dsl::SyntaxError& e) {
        CHECK(e.offset == 2);
    }
    CHECK_THROWS_AS(parse("unknown_fn(2)"), dsl::UnknownFunctionError);
    CHECK_THROWS_AS(parse("exp(1, 2)"), dsl::ArityMismatchError);
    CHECK_THROWS_AS(parse("exp()"), dsl::ArityMismatchError);
    CHECK_THROWS_AS(parse("(1 + 2"), dsl::SyntaxError);
    CHECK_THROWS_AS(parse("1 2"), dsl::SyntaxError);
}

TEST_CASE("evaluation domain errors") {
    CHECK_THROWS_AS(eval("log(0)"), dsl::DomainError);
    CHECK_THROWS_AS(eval("log(-1)"), dsl::DomainError);
    CHECK_THROWS_AS(eval("sqrt(-1)"), dsl::DomainError);
    CHECK_THROWS_AS(eval("gamma_fn(0)"), dsl::DomainError);
    CHECK_THROWS_AS(eval("gamma_fn(-2)"), dsl::DomainError);
    CHECK_THROWS_AS(eval("factorial(2.5)"), dsl::DomainError);
    CHECK_THROWS_AS(eval("factorial(-1)"), dsl::DomainError);
    CHECK_THROWS_AS(eval("(-1) ^ 0.5"), dsl::DomainError);
}

TEST_CASE("pretty_print round trip on fixed expressions") {
    const std::vector<std::string> exprs = {
        "1 + 2*3",
        "(1 + 2)*3",
        "2 - 3 - 4",
        "2^3^2",
        "(2^3)^2",
        "-theta^2",
        "exp(-theta*theta/(2*n*n))/(sqrt(2*pi)*n)",
        "indicator(theta >= 0)*exp(-theta)",
        "theta/(1 - theta)",
        "gamma_fn(1/n)*gamma_fn(1/n)/gamma_fn(2/n)",
        "1/(theta*(1 - theta))",
        "abs(theta) < 3",
    };
    const Binding b{{"theta", 0.37}, {"n", 7.0}};
    for (const auto& s : exprs) {
        auto e1 = parse(s);
        const std::string printed = pretty_print(e1);
        auto e2 = parse(printed);
        INFO(s << "  ->  " << printed);
        CHECK(evaluate(e1, b) == evaluate(e2, b));
        // printing is a fixed point
        CHECK(pretty_print(e2) == printed);
    }
}

namespace {

// random expression generator: grammar-directed, always parseable
std::string gen_expr(std::mt19937& rng, int depth) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 8);
    std::uniform_real_distribution<double> num(0.1, 4.0);
    switch (pick(rng)) {
        case 0: {
            std::ostringstream os;
            os.precision(17);
            os << num(rng);
            return os.str();
        }
        case 1: return "theta";
        case 2: return "pi";
        case 3: return "(" + gen_expr(rng, depth - 1) + " + " + gen_expr(rng, depth - 1) + ")";
        case 4: return "(" + gen_expr(rng, depth - 1) + " - " + gen_expr(rng, depth - 1) + ")";
        case 5: return "(" + gen_expr(rng, depth - 1) + "*" + gen_expr(rng, depth - 1) + ")";
        case 6: return "(" + gen_expr(rng, depth - 1) + "/" + gen_expr(rng, depth - 1) + ")";
        case 7: return "exp(-abs(" + gen_expr(rng, depth - 1) + "))";
        default: return "sqrt(abs(" + gen_expr(rng, depth - 1) + "))";
    }
}

}  // namespace

TEST_CASE("pretty_print round trip under fuzzing") {
    std::mt19937 rng(20240817);
    const Binding b{{"theta", 1.25}};
    for (int i = 0; i < 200; ++i) {
        const std::string src = gen_expr(rng, 4);
        auto e1 = parse(src);
        auto e2 = parse(pretty_print(e1));
        double v1, v2;
        try {
            v1 = evaluate(e1, b);
        } catch (const dsl::DomainError&) {
            continue;
        }
        v2 = evaluate(e2, b);
        INFO(src);
        CHECK(v1 == v2);
    }
}
