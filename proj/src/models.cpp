#include "twoband/models.hpp"

#include <string>

namespace twoband::models {

namespace {
std::string signed_name(double sign, const std::string& base) { return (sign < 0 ? "-" : "+") + base; }
}  // namespace

Hoppings sigma_x(double sign) { return {signed_name(sign, "sigma_x"), {{0, sign * pauli::x()}}}; }
Hoppings sigma_y(double sign) { return {signed_name(sign, "sigma_y"), {{0, sign * pauli::y()}}}; }
Hoppings sigma_z(double sign) { return {signed_name(sign, "sigma_z"), {{0, sign * pauli::z()}}}; }

Hoppings r_n(int n, double sign) {
  if (n == 0) {
    Hoppings h = sigma_x(sign);
    h.name = signed_name(sign, "R_0");
    return h;
  }
  Matrix2 m = Matrix2::Zero();
  if (n > 0) {
    m(1, 0) = sign;
  } else {
    m(0, 1) = sign;
  }
  return {signed_name(sign, "R_" + std::to_string(n)), {{n > 0 ? n : -n, m}}};
}

Hoppings ssh(double v) {
  Matrix2 h0;
  h0 << v, 1.0, 1.0, -v;
  Matrix2 h1 = Matrix2::Zero();
  h1(1, 0) = 1.0;
  return {"ssh(v=" + std::to_string(v) + ")", {{0, h0}, {1, h1}}};
}

Hoppings xz_winding(int w) {
  if (w == 0) {
    Hoppings h = sigma_x(1.0);
    h.name = "xz_winding_0";
    return h;
  }
  const int j = w > 0 ? w : -w;
  const double s = w > 0 ? 1.0 : -1.0;
  // cos(jk) sigma_x + s sin(jk) sigma_z
  Matrix2 m;
  m << Complex(0.0, -0.5 * s), 0.5, 0.5, Complex(0.0, 0.5 * s);
  return {"xz_winding_" + std::to_string(w), {{j, m}}};
}

std::vector<Hoppings> all_fixtures() {
  std::vector<Hoppings> out{sigma_x(1.0), sigma_x(-1.0), sigma_z(1.0), sigma_z(-1.0)};
  for (int n = -3; n <= 3; ++n) {
    out.push_back(r_n(n, 1.0));
    out.push_back(r_n(n, -1.0));
  }
  for (double v : {-1.0, 1.0}) out.push_back(ssh(v));
  return out;
}

}  // namespace twoband::models
