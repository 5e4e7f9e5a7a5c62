#include "dtm/problems.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <set>

#include "dtm/errors.hpp"
#include "dtm/expr.hpp"

namespace dtm {

namespace {

void add_values(std::vector<RefValue>& out, const char* var, double v0,
                std::initializer_list<double> vals) {
    double v = v0;
    for (double x : vals) {
        out.push_back({var, v, x});
        v += 0.1;
    }
}

void add_errors(std::vector<RefError>& out, const char* var, double v0,
                std::initializer_list<double> vals) {
    double v = v0;
    for (double x : vals) {
        out.push_back({var, v, x});
        v += 0.1;
    }
}

void add_fractional(std::vector<RefFractional>& out, const char* var, const char* alpha,
                    std::initializer_list<double> vals) {
    double v = 0.1;
    for (double x : vals) {
        out.push_back({var, alpha, v, x});
        v += 0.1;
    }
}

std::vector<double> grid_to(double last) {
    std::vector<double> g;
    for (int i = 1; i * 0.1 <= last + 1e-12; ++i) g.push_back(i * 0.1);
    return g;
}

ExampleCase case1() {
    ExampleCase c;
    c.default_order = 20;
    c.ref_grid = grid_to(0.9);
    ProblemSpec& s = c.spec;
    s.name = "log-pair";
    s.order = c.default_order;
    s.vars = {{"w1", false, 1, false, {0.0}},
              {"w2", false, 1, false, {0.0}},
              {"w3", false, 1, false, {0.5}},
              {"w4", false, 1, false, {-0.5}},
              {"w", true, 1, false, {}}};
    s.eqs = {{"w1", "2*w3"},
             {"w2", "2*w4"},
             {"w3", "-2*w3 + exp(w2) + w - (2*v^4 + 2*v^3 + 1)/(2*(1 + v)^2)"},
             {"w4", "2*w4 + exp(w1) + w + (-2*v^4 + 2*v^3 - 1)/(2*(1 - v)^2)"}};
    s.constraints = {"w1 + w2 - ln(1 - v^2)"};
    c.exact = {{"w1", [](double v) { return std::log(1.0 + v); }},
               {"w2", [](double v) { return std::log(1.0 - v); }},
               {"w3", [](double v) { return 0.5 / (1.0 + v); }},
               {"w4", [](double v) { return -0.5 / (1.0 - v); }},
               {"w", [](double v) { return v * v; }}};
    add_values(c.values, "w1", 0.1,
               {0.0953101798, 0.1823215568, 0.2623642645, 0.3364722365, 0.4054650927,
                0.4700029649, 0.5306123016, 0.5875375291, 0.6390499221, 0.6687714032});
    add_values(c.values, "w2", 0.1,
               {-0.1053605157, -0.2231435513, -0.3566749439, -0.5108256234, -0.6931471371,
                -0.9162882787, -1.2038920520, -1.6075458670, -2.2633497340});
    add_values(c.values, "w3", 0.1,
               {0.4545454545, 0.4166666667, 0.3846153846, 0.3571428587, 0.3333334923,
                0.3125068553, 0.2942819253, 0.2803398256, 0.2919523656});
    add_errors(c.errors, "w1", 0.1,
               {7.2e-16, 3.0e-16, 1.4e-12, 4.5e-10, 3.7e-8, 1.4e-6, 3.0e-5, 4.2e-4, 4.3e-3,
                3.5e-2});
    add_errors(c.errors, "w2", 0.1,
               {3.9e-16, 2.4e-16, 1.9e-12, 6.6e-10, 6.2e-8, 2.6e-6, 6.7e-5, 1.1e-3, 1.7e-2});
    add_errors(c.errors, "w3", 0.1,
               {0.0, 2.1e-15, 1.0e-11, 4.3e-9, 4.7e-7, 2.1e-5, 5.5e-4, 9.2e-3, 1.0e-1});
    c.maxima = {{"w1", 10, 1.5e-2}, {"w2", 10, 1.8e-1},  {"w3", 10, 8.2e-2}, {"w4", 10, 1.5e0},
                {"w1", 15, 6.2e-3}, {"w2", 15, 8.27e-2}, {"w3", 15, 4.8e-2}, {"w4", 15, 9.2e-1},
                {"w1", 20, 2.8e-3}, {"w2", 20, 3.9e-2},  {"w3", 20, 2.8e-2}, {"w4", 20, 5.4e-1}};
    return c;
}

ExampleCase case2() {
    ExampleCase c;
    c.default_order = 15;
    c.ref_grid = grid_to(0.9);
    ProblemSpec& s = c.spec;
    s.name = "unit-circle-oscillator";
    s.order = c.default_order;
    s.vars = {{"w1", false, 2, false, {1.0, 0.0}},
              {"w2", false, 2, false, {0.0, 1.0}},
              {"w", true, 1, false, {}}};
    s.eqs = {{"w1", "2*w2 - 2*w2^3 - w1*w"}, {"w2", "2*w1 - 2*w1^3 - w2*w"}};
    s.constraints = {"w1^2 + w2^2 - 1"};
    c.exact = {{"w1", [](double v) { return std::cos(v); }},
               {"w2", [](double v) { return std::sin(v); }},
               {"w", [](double v) { return 1.0 + std::sin(2.0 * v); }}};
    c.maxima = {{"w1", 5, 7.2e-4},   {"w2", 5, 9.3e-5},   {"w", 5, 1.1e-2},
                {"w1", 10, 5.8e-10}, {"w2", 10, 7.8e-9},  {"w", 10, 1.5e-5},
                {"w1", 15, 8.7e-15}, {"w2", 15, 4.4e-16}, {"w", 15, 6.0e-11}};
    return c;
}

ExampleCase case3(double lambda) {
    char lam[32];
    std::snprintf(lam, sizeof lam, "%.17g", lambda);
    const std::string L(lam);
    ExampleCase c;
    c.default_order = 12;
    c.ref_grid = grid_to(1.0);
    ProblemSpec& s = c.spec;
    s.name = "coupled-exponentials";
    s.order = c.default_order;
    s.vars = {{"w1", false, 1, false, {1.0}},
              {"w2", false, 1, false, {1.0}},
              {"w3", false, 1, false, {0.0}},
              {"u", true, 1, false, {}}};
    s.eqs = {{"w1", "v*" + L + "*u + exp(v) - v*" + L + "*(exp(v) + exp(-v))"},
             {"w2", "(" + L + " - 5)*u - exp(-v) - (" + L + " - 5)*(exp(v) + exp(-v))"},
             {"w3", "u"}};
    s.constraints = {"v^2*w1 + w2*sin(v) - v^2*exp(v) - sin(v)*exp(-v)"};
    c.exact = {{"w1", [](double v) { return std::exp(v); }},
               {"w2", [](double v) { return std::exp(-v); }},
               {"w3", [](double v) { return std::exp(v) - std::exp(-v); }},
               {"u", [](double v) { return std::exp(v) + std::exp(-v); }}};
    add_values(c.values, "w1", 0.0,
               {1.000000000, 1.105170918, 1.221402758, 1.349858807, 1.491824697, 1.648721270,
                1.822118800, 2.013752707, 2.225540928, 2.459603111, 2.718281828});
    add_values(c.values, "w2", 0.0,
               {1.000000000, 0.904837418, 0.818730753, 0.740818220, 0.670320046, 0.606530659,
                0.548811636, 0.496585303, 0.449328964, 0.406569659, 0.367879441});
    add_values(c.values, "w3", 0.0,
               {0.000000000, 0.200333500, 0.402672005, 0.609040586, 0.821504651, 1.042190610,
                1.273307164, 1.517167403, 1.776211964, 2.053033451, 2.350402387});
    add_errors(c.errors, "w1", 0.0,
               {0.0, 2.0e-16, 2.0e-16, 1.6e-16, 7.4e-16, 1.2e-14, 1.2e-13, 8.1e-13, 4.2e-12,
                1.7e-11, 6.3e-11});
    add_errors(c.errors, "w2", 0.0,
               {0.0, 1.2e-16, 1.3e-16, 1.3e-16, 1.4e-15, 3.1e-14, 3.6e-13, 2.9e-12, 1.8e-11,
                9.4e-11, 4.0e-10});
    add_errors(c.errors, "w3", 0.0,
               {0.0, 6.9e-16, 1.3e-16, 1.3e-16, 2.5e-15, 3.7e-14, 3.2e-13, 2.0e-12, 9.9e-12,
                3.9e-11, 1.3e-10});
    c.maxima = {{"w1", 5, 9.9e-3},   {"w2", 5, 1.2e-3},   {"w3", 5, 4.0e-4},
                {"w1", 10, 3.0e-7},  {"w2", 10, 2.3e-8},  {"w3", 10, 5.0e-8},
                {"w1", 15, 8.1e-13}, {"w2", 15, 7.1e-13}, {"w3", 15, 5.7e-15}};
    return c;
}

ExampleCase case4() {
    ExampleCase c;
    c.default_order = 20;
    c.ref_grid = grid_to(1.0);
    ProblemSpec& s = c.spec;
    s.name = "circular-track";
    s.order = c.default_order;
    s.vars = {{"w1", false, 2, false, {0.0, 0.0}},
              {"w2", false, 2, false, {1.0, 0.0}},
              {"w3", true, 1, false, {}}};
    s.eqs = {{"w1", "2*w2 + w1*w3"}, {"w2", "-2*w1 + w2*w3"}};
    s.constraints = {"w1^2 + w2^2 - 1"};
    c.exact = {{"w1", [](double v) { return std::sin(v * v); }},
               {"w2", [](double v) { return std::cos(v * v); }},
               {"w3", [](double v) { return -4.0 * v * v; }}};
    add_values(c.values, "w1", 0.1,
               {0.009999833, 0.039989334, 0.089878549, 0.159318207, 0.247403959, 0.352274233,
                0.470625888, 0.597195441, 0.724287174, 0.841470984});
    add_values(c.values, "w2", 0.0,
               {1.000000000, 0.999950000, 0.999200107, 0.995952733, 0.987227283, 0.968912422,
                0.935896824, 0.882332859, 0.802095755, 0.689498433, 0.540302306});
    add_errors(c.errors, "w1", 0.1,
               {0.0, 0.0, 1.5e-16, 1.7e-16, 2.4e-14, 9.3e-13, 2.0e-11, 3.0e-10, 3.3e-9, 2.9e-8});
    add_errors(c.errors, "w2", 0.0,
               {0.0, 0.0, 1.1e-16, 1.1e-16, 1.1e-16, 1.1e-16, 1.0e-14, 4.5e-13, 1.2e-11,
                2.4e-10, 3.8e-9});
    c.maxima = {{"w1", 10, 4.4e-5}, {"w2", 10, 3.8e-4}, {"w3", 10, 0.0},
                {"w1", 15, 2.7e-6}, {"w2", 15, 2.7e-7}, {"w3", 15, 0.0},
                {"w1", 20, 2.4e-8}, {"w2", 20, 2.0e-9}, {"w3", 20, 0.0}};
    return c;
}

ExampleCase case5() {
    ExampleCase c;
    c.default_order = 10;
    c.ref_grid = grid_to(0.9);
    ProblemSpec& s = c.spec;
    s.name = "fractional-root-feedback";
    s.order = c.default_order;
    s.alpha = {1, 1};
    s.vars = {{"w1", false, 1, true, {1.0}}, {"w2", true, 1, false, {1.0}}};
    s.eqs = {{"w1", "w2 + 2*exp(2*v) - sqrt(w1)"}};
    s.constraints = {"w1 - w2^2"};
    c.exact = {{"w1", [](double v) { return std::exp(2.0 * v); }},
               {"w2", [](double v) { return std::exp(v); }}};
    add_values(c.values, "w1", 0.1,
               {1.221402758, 1.491824698, 1.822118800, 2.225540926, 2.718281801, 3.320116716,
                4.055198820, 4.953027348, 6.049628566, 7.388994709});
    add_values(c.values, "w2", 0.1,
               {1.105170918, 1.221402758, 1.349858808, 1.491824698, 1.648721271, 1.822118800,
                2.013752707, 2.225540926, 2.459603103, 2.718281801});
    add_fractional(c.fractional, "w1", "9/10",
                   {1.232592481, 1.522000050, 1.881442677, 2.327166133, 2.879128803,
                    3.561843540, 4.405409180, 5.446773813, 6.731280574, 8.314556977});
    add_fractional(c.fractional, "w2", "9/10",
                   {1.110221816, 1.233693661, 1.371656910, 1.525505211, 1.696799638,
                    1.887285142, 2.098908983, 2.333842138, 2.594505315, 2.883602243});
    add_fractional(c.fractional, "w1", "4/5",
                   {1.242818926, 1.550840020, 1.939997843, 2.429996427, 3.045186405,
                    3.815644105, 4.778498484, 5.979561723, 7.475331043, 9.335443038});
    add_fractional(c.fractional, "w2", "4/5",
                   {1.114817889, 1.245327274, 1.392838054, 1.558844590, 1.745046381,
                    1.953368506, 2.185984441, 2.445345519, 2.734224962, 3.055790657});
    add_fractional(c.fractional, "w1", "7/10",
                   {1.251760574, 1.577528022, 1.996283505, 2.531647704, 3.212987402,
                    4.076781955, 5.168309651, 6.543727135, 8.272630664, 10.44120618});
    add_fractional(c.fractional, "w2", "7/10",
                   {1.118821064, 1.255996824, 1.412898962, 1.591115024, 1.792478585,
                    2.019089728, 2.273321617, 2.557801126, 2.875342155, 3.228800260});
    return c;
}

double d1(const ExactFn& f, double v, double h) {
    return (-f(v + 2 * h) + 8 * f(v + h) - 8 * f(v - h) + f(v - 2 * h)) / (12 * h);
}

double d2(const ExactFn& f, double v, double h) {
    return (-f(v + 2 * h) + 16 * f(v + h) - 30 * f(v) + 16 * f(v - h) - f(v - 2 * h)) /
           (12 * h * h);
}

// fourth-order stencils at h and h/2 combined once, giving sixth order;
// the second-derivative step is larger because its rounding term carries 1/h^2
double deriv1(const ExactFn& f, double v) {
    const double h = 1e-4;
    return (16 * d1(f, v, h / 2) - d1(f, v, h)) / 15;
}

double deriv2(const ExactFn& f, double v) {
    const double h = 1e-2;
    return (16 * d2(f, v, h / 2) - d2(f, v, h)) / 15;
}

} // namespace

double self_check(const ExampleCase& c) {
    if (c.spec.alpha.p != c.spec.alpha.q)
        throw ConfigError("self_check differentiates numerically and needs classical orders");
    std::set<std::string> ids;
    std::map<std::string, int> order_of;
    for (const Variable& var : c.spec.vars) {
        ids.insert(var.id);
        order_of[var.id] = var.order;
    }
    const ParseSymbols sym{c.spec.indep, &ids};
    double worst = 0.0;
    for (double v = 0.0; v < 0.95; v += 0.1) {
        const auto state = [&](const std::string& id) { return c.exact.at(id)(v); };
        for (const Equation& eq : c.spec.eqs) {
            const ExactFn& f = c.exact.at(eq.lhs_var);
            const double lhs = order_of.at(eq.lhs_var) == 2 ? deriv2(f, v) : deriv1(f, v);
            const double rhs = eval_point(*parse_expr(eq.rhs, sym), v, state);
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
        for (const std::string& g : c.spec.constraints)
            worst = std::max(worst, std::fabs(eval_point(*parse_expr(g, sym), v, state)));
    }
    return worst;
}

ExampleCase get_example(int n, double lambda) {
    ExampleCase c;
    switch (n) {
        case 1: c = case1(); break;
        case 2: c = case2(); break;
        case 3: c = case3(lambda); break;
        case 4: c = case4(); break;
        case 5: c = case5(); break;
        default: throw ConfigError("example number must be 1..5");
    }
    const double r = self_check(c);
    if (!(r <= 1e-8))
        throw NumericError("registry self-check failed for " + c.spec.name);
    return c;
}

} // namespace dtm
