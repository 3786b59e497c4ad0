#include "confluence/scenario.hpp"

#include "confluence/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <vector>

namespace confluence {

double kinetic_coefficient(double kappa) noexcept
{
    // beta_inf B_Omega(inf) / (kappa C_Omega(inf)) = (1/sqrt 2)(4/3) / (2 kappa)
    return std::sqrt(2.0) / (3.0 * kappa);
}

double TravellingReference::theta(double x, double t) const noexcept
{
    const double right = x - phi20(t);
    const double left = phi10(t) - x;
    double v = kinetic * speed;
    if (right > 0.0) v += 2.0 * std::expm1(speed * right);
    if (left > 0.0) v += 2.0 * std::expm1(speed * left);
    return v;
}

double TravellingReference::theta_x(double x, double t) const noexcept
{
    const double right = x - phi20(t);
    const double left = phi10(t) - x;
    double v = 0.0;
    if (right > 0.0) v += 2.0 * speed * std::exp(speed * right);
    if (left > 0.0) v -= 2.0 * speed * std::exp(speed * left);
    return v;
}

double TravellingReference::theta_t(double x, double t) const noexcept
{
    const double right = x - phi20(t);
    const double left = phi10(t) - x;
    double v = 0.0;
    if (right > 0.0) v += 2.0 * speed * speed * std::exp(speed * right);
    if (left > 0.0) v += 2.0 * speed * speed * std::exp(speed * left);
    return v;
}

double Scenario::sum_ratio(double t) const noexcept
{
    return (phi10.d(t) + phi20.d(t)) / psi0_t(t);
}

double Scenario::sum_ratio_t(double t) const noexcept
{
    const double p = psi0_t(t);
    const double s = phi10.d(t) + phi20.d(t);
    const double p_t = phi20.dd(t) - phi10.dd(t);
    const double s_t = phi10.dd(t) + phi20.dd(t);
    return (s_t * p - s * p_t) / (p * p);
}

std::optional<TravellingReference> Scenario::reference() const
{
    if (!travelling) return std::nullopt;
    return TravellingReference{phi10.c[1], kinetic_coefficient(kappa), phi10.c[0], phi20.c[0]};
}

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) throw ValidationError(what);
}

constexpr int kSamples = 401;

}  // namespace

void Scenario::validate() const
{
    require(std::isfinite(l1) && std::isfinite(l2) && l1 < l2, "domain needs l1 < l2");
    require(t_star > 0.0 && t_star < t_end, "contact time must lie in (0, t_end)");
    require(epsilon > 0.0, "epsilon must be positive");
    require(kappa > 0.0, "kappa must be positive");

    const double scale = std::max({1.0, std::abs(phi10(t_star)), std::abs(phi20(t_star))});
    require(std::abs(psi0(t_star)) <= 1e-10 * scale, "fronts must meet at t_star: psi0(t_star) = " +
                                                           std::to_string(psi0(t_star)));
    for (int i = 0; i < kSamples; ++i) {
        const double t = t_end * i / (kSamples - 1);
        require(psi0_t(t) < 0.0, "psi0 must decrease on [0, t_end] (psi0_t < 0), violated at t = " +
                                     std::to_string(t));
        const double tol = 1e-10 * std::max(1.0, std::abs(phi10.d(t)));
        require(std::abs(gamma1_plus(t) + gamma1_minus(t) - 2.0 * phi10.d(t)) <= tol,
                "Stefan identity gamma1+ + gamma1- = 2 phi10_t violated at t = " + std::to_string(t));
        const double tol2 = 1e-10 * std::max(1.0, std::abs(phi20.d(t)));
        require(std::abs(gamma2_plus(t) + gamma2_minus(t) + 2.0 * phi20.d(t)) <= tol2,
                "Stefan identity gamma2+ + gamma2- = -2 phi20_t violated at t = " + std::to_string(t));
    }
    if (travelling) {
        const double v = phi10.c[1];
        require(v > 0.0, "travelling reference needs phi10 moving right");
        require(phi10.c[2] == 0.0 && phi10.c[3] == 0.0 && phi20.c[2] == 0.0 && phi20.c[3] == 0.0,
                "travelling reference needs linear fronts");
        require(phi20.c[1] == -v, "travelling reference needs equal and opposite speeds");
        auto same = [](const Cubic& g, double value) { return g == Cubic::constant(value); };
        require(same(gamma1_plus, 0.0) && same(gamma1_minus, 2.0 * v) && same(gamma2_plus, 2.0 * v) &&
                    same(gamma2_minus, 0.0),
                "travelling reference fixes gamma1+ = 0, gamma1- = 2v, gamma2+ = 2v, gamma2- = 0");
    }
    require(!bc.reference || travelling, "bc = reference needs reference = travelling");
    Cutoff{*this};
}

Cutoff::Cutoff(const Scenario& s) : l1_(s.l1), l2_(s.l2)
{
    double lo = s.phi10(0.0);
    double hi = s.phi20(0.0);
    for (int i = 0; i < kSamples; ++i) {
        const double t = s.t_star * i / (kSamples - 1);
        lo = std::min({lo, s.phi10(t), s.phi20(t)});
        hi = std::max({hi, s.phi10(t), s.phi20(t)});
    }
    const double margin = 0.1 * s.length();
    a_ = lo - margin;
    b_ = hi + margin;
    require(a_ > l1_ + 0.05 * s.length() && b_ < l2_ - 0.05 * s.length(),
            "fronts come too close to the walls for the cutoff plateau");
}

namespace {

// 10 s^3 - 15 s^4 + 6 s^5 with its derivatives
struct Quintic {
    double v, d, dd;
};

Quintic smoothstep(double s)
{
    if (s <= 0.0) return {0.0, 0.0, 0.0};
    if (s >= 1.0) return {1.0, 0.0, 0.0};
    const double s2 = s * s;
    return {s2 * s * (10.0 - 15.0 * s + 6.0 * s2), 30.0 * s2 * (1.0 - s) * (1.0 - s), 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)};
}

}  // namespace

double Cutoff::operator()(double x) const noexcept
{
    if (x < a_) return smoothstep((x - l1_) / (a_ - l1_)).v;
    if (x > b_) return smoothstep((l2_ - x) / (l2_ - b_)).v;
    return 1.0;
}

double Cutoff::d(double x) const noexcept
{
    if (x < a_) return smoothstep((x - l1_) / (a_ - l1_)).d / (a_ - l1_);
    if (x > b_) return -smoothstep((l2_ - x) / (l2_ - b_)).d / (l2_ - b_);
    return 0.0;
}

double Cutoff::dd(double x) const noexcept
{
    if (x < a_) {
        const double w = a_ - l1_;
        return smoothstep((x - l1_) / w).dd / (w * w);
    }
    if (x > b_) {
        const double w = l2_ - b_;
        return smoothstep((l2_ - x) / w).dd / (w * w);
    }
    return 0.0;
}

Scenario make_linear_scenario(const std::string& name, double x1, double v1, double x2, double v2, double l1,
                              double l2, double t_end)
{
    if (!(v1 > v2)) throw ValidationError("linear scenario needs v1 > v2 so the fronts close");
    Scenario s;
    s.name = name;
    s.l1 = l1;
    s.l2 = l2;
    s.t_end = t_end;
    s.t_star = (x2 - x1) / (v1 - v2);
    s.phi10 = {{x1, v1, 0.0, 0.0}};
    s.phi20 = {{x2, v2, 0.0, 0.0}};
    s.gamma1_plus = Cubic::constant(0.0);
    s.gamma1_minus = Cubic::constant(2.0 * v1);
    s.gamma2_plus = Cubic::constant(-2.0 * v2);
    s.gamma2_minus = Cubic::constant(0.0);
    s.validate();
    return s;
}

Scenario make_travelling_scenario(double half_gap, double speed, double l1, double l2, double t_end)
{
    Scenario s = make_linear_scenario("symmetric", -half_gap, speed, half_gap, -speed, l1, l2, t_end);
    s.travelling = true;
    s.bc.reference = true;
    s.validate();
    return s;
}

// ---- text format ----

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double to_number(const std::string& text, const std::string& key)
{
    const std::string s = trim(text);
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || s.empty())
        throw ParseError("key '" + key + "': not a number: '" + s + "'");
    return v;
}

std::vector<double> to_list(const std::string& text, const std::string& key, char open = '[', char close = ']')
{
    std::string s = trim(text);
    if (open != 0) {
        if (s.size() < 2 || s.front() != open || s.back() != close)
            throw ParseError("key '" + key + "': expected a bracketed list");
        s = s.substr(1, s.size() - 2);
    }
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_number(item, key));
    return out;
}

Cubic to_cubic(const std::string& text, const std::string& key)
{
    const auto v = to_list(text, key);
    if (v.empty() || v.size() > 4) throw ParseError("key '" + key + "': needs 1 to 4 coefficients");
    Cubic c;
    std::copy(v.begin(), v.end(), c.c.begin());
    return c;
}

void parse_bc(const std::string& text, BoundaryCondition& bc)
{
    const std::string s = trim(text);
    if (s == "reference") {
        bc.kind = BoundaryKind::dirichlet;
        bc.reference = true;
        return;
    }
    const auto colon = s.find(':');
    const std::string kind = trim(s.substr(0, colon));
    if (kind == "dirichlet") bc.kind = BoundaryKind::dirichlet;
    else if (kind == "neumann") bc.kind = BoundaryKind::neumann;
    else throw ParseError("key 'bc': unknown kind '" + kind + "'");
    if (colon == std::string::npos) return;
    const auto v = to_list(s.substr(colon + 1), "bc", 0, 0);
    if (v.size() != 2) throw ParseError("key 'bc': expected two values after the kind");
    bc.left = Cubic::constant(v[0]);
    bc.right = Cubic::constant(v[1]);
}

}  // namespace

Scenario parse_scenario(std::istream& in)
{
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (!kv.emplace(key, trim(t.substr(eq + 1))).second)
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    if (kv.empty()) throw ParseError("scenario is empty");

    Scenario s;
    auto take = [&kv](const std::string& key) -> std::optional<std::string> {
        const auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto need = [&take](const std::string& key) {
        auto v = take(key);
        if (!v) throw ParseError("missing required key '" + key + "'");
        return *v;
    };

    if (auto v = take("name")) s.name = *v;
    s.l1 = to_number(need("l1"), "l1");
    s.l2 = to_number(need("l2"), "l2");
    s.t_end = to_number(need("t_end"), "t_end");
    s.t_star = to_number(need("t_star"), "t_star");
    if (auto v = take("epsilon")) s.epsilon = to_number(*v, "epsilon");
    if (auto v = take("kappa")) s.kappa = to_number(*v, "kappa");
    s.phi10 = to_cubic(need("phi10.coeffs"), "phi10.coeffs");
    s.phi20 = to_cubic(need("phi20.coeffs"), "phi20.coeffs");
    s.gamma1_plus = to_cubic(need("gamma1_plus.coeffs"), "gamma1_plus.coeffs");
    s.gamma1_minus = to_cubic(need("gamma1_minus.coeffs"), "gamma1_minus.coeffs");
    s.gamma2_plus = to_cubic(need("gamma2_plus.coeffs"), "gamma2_plus.coeffs");
    s.gamma2_minus = to_cubic(need("gamma2_minus.coeffs"), "gamma2_minus.coeffs");
    if (auto v = take("bc")) parse_bc(*v, s.bc);
    if (auto v = take("bc.left.coeffs")) s.bc.left = to_cubic(*v, "bc.left.coeffs");
    if (auto v = take("bc.right.coeffs")) s.bc.right = to_cubic(*v, "bc.right.coeffs");
    if (auto v = take("reference")) {
        if (*v == "travelling") s.travelling = true;
        else if (*v != "none") throw ParseError("key 'reference': expected travelling or none");
    }
    if (auto v = take("model.eta_equation")) {
        if (*v == "printed") s.model.eta_equation = EtaEquation::printed;
        else if (*v == "balanced") s.model.eta_equation = EtaEquation::balanced;
        else throw ParseError("key 'model.eta_equation': expected printed or balanced");
    }
    if (auto v = take("model.sum_kernel")) {
        if (*v == "none") s.model.sum_kernel = SumKernel::none;
        else if (*v == "b_omega") s.model.sum_kernel = SumKernel::b_omega;
        else if (*v == "bz_omega") s.model.sum_kernel = SumKernel::bz_omega;
        else throw ParseError("key 'model.sum_kernel': expected none, b_omega or bz_omega");
    }
    if (!kv.empty()) throw ParseError("unknown key '" + kv.begin()->first + "'");
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    return parse_scenario(in);
}

namespace {

std::string coeffs(const Cubic& c)
{
    std::ostringstream o;
    o << std::setprecision(17) << '[' << c.c[0] << ", " << c.c[1] << ", " << c.c[2] << ", " << c.c[3] << ']';
    return o.str();
}

}  // namespace

void write_scenario(std::ostream& out, const Scenario& s)
{
    out << std::setprecision(17);
    out << "name = " << s.name << '\n';
    out << "l1 = " << s.l1 << "\nl2 = " << s.l2 << '\n';
    out << "t_end = " << s.t_end << "\nt_star = " << s.t_star << '\n';
    out << "epsilon = " << s.epsilon << "\nkappa = " << s.kappa << '\n';
    out << "phi10.coeffs = " << coeffs(s.phi10) << '\n';
    out << "phi20.coeffs = " << coeffs(s.phi20) << '\n';
    out << "gamma1_plus.coeffs = " << coeffs(s.gamma1_plus) << '\n';
    out << "gamma1_minus.coeffs = " << coeffs(s.gamma1_minus) << '\n';
    out << "gamma2_plus.coeffs = " << coeffs(s.gamma2_plus) << '\n';
    out << "gamma2_minus.coeffs = " << coeffs(s.gamma2_minus) << '\n';
    if (s.bc.reference) {
        out << "bc = reference\n";
    } else {
        out << "bc = " << (s.bc.kind == BoundaryKind::dirichlet ? "dirichlet" : "neumann") << '\n';
        out << "bc.left.coeffs = " << coeffs(s.bc.left) << '\n';
        out << "bc.right.coeffs = " << coeffs(s.bc.right) << '\n';
    }
    out << "reference = " << (s.travelling ? "travelling" : "none") << '\n';
    out << "model.eta_equation = " << (s.model.eta_equation == EtaEquation::printed ? "printed" : "balanced") << '\n';
    const char* k = s.model.sum_kernel == SumKernel::none ? "none"
                    : s.model.sum_kernel == SumKernel::b_omega ? "b_omega" : "bz_omega";
    out << "model.sum_kernel = " << k << '\n';
}

}  // namespace confluence
