// Solves x^2 + 7^(2k+1) = 4y^n for k <= 2, n <= 15 and names each solution's family.

#include <iostream>

#include <lrn/lrn.hpp>

int main() {
    const auto res = lrn::solve_complete(7, 2, 15);
    for (const auto& s : res.solutions) {
        const auto c = lrn::classify_solution(s);
        std::cout << s << "  " << lrn::to_string(c.family) << ' ' << lrn::params_to_text(c.params);
        if (c.lifted()) std::cout << "  via " << *c.via;
        std::cout << '\n';
    }
    std::cout << res.certificate.at("steps").size() << " certificate steps, replay "
              << (lrn::verify_certificate(res.certificate, res.solutions) ? "ok" : "FAILED") << '\n';
}
