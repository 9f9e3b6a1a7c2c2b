#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "bachvol/bachvol.hpp"

namespace py = pybind11;
using namespace bachvol;

namespace {

py::dict as_dict(const GreeksReport& g) {
  py::dict d;
  d["delta"] = g.delta;
  d["gamma"] = g.gamma;
  d["vega"] = g.vega;
  d["theta"] = g.theta;
  d["breakeven"] = g.breakeven;
  return d;
}

py::dict as_dict(const GreekRatios& r) {
  py::dict d;
  d["delta"] = r.delta;
  d["vega"] = r.vega;
  d["gamma"] = r.gamma;
  d["theta"] = r.theta;
  return d;
}

// Exactly one of price, time_value and log_ratio must be given.
TimeValueQuote make_quote(const OptionTerms& terms, std::optional<double> price,
                          std::optional<double> time_value, std::optional<double> log_ratio) {
  const int given = price.has_value() + time_value.has_value() + log_ratio.has_value();
  if (given != 1) throw Error(ErrorKind::parameter, "give exactly one of price, time_value, log_ratio");
  if (price) return TimeValueQuote::from_price(terms, *price);
  if (time_value) return TimeValueQuote::from_time_value(terms, *time_value);
  return TimeValueQuote::from_log_ratio(terms, *log_ratio);
}

ImpliedMethod parse_method(const std::string& name) {
  if (name == "auto") return ImpliedMethod::automatic;
  if (name == "exact") return ImpliedMethod::exact;
  if (name == "gamma") return ImpliedMethod::gamma;
  if (name == "asymptotic") return ImpliedMethod::asymptotic;
  throw Error(ErrorKind::parameter, "method must be auto, exact, gamma or asymptotic");
}

}  // namespace

PYBIND11_MODULE(_bachvol, m) {
  m.doc() = "Bachelier and Black-Scholes pricing, implied volatility and conversion";

  static py::exception<Error> error_type(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::handle(error_type)(e.what());
      instance.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error_type.ptr(), instance.ptr());
    }
  });

  m.def(
      "bachelier_call",
      [](double s, double k, double t, double vol) { return bachelier_call(OptionTerms(s, k, t), NormalVol(vol)); },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::arg("vol"));
  m.def(
      "bachelier_time_value",
      [](double s, double k, double t, double vol) {
        return bachelier_time_value(OptionTerms(s, k, t), NormalVol(vol));
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::arg("vol"));
  m.def(
      "bachelier_log_time_value",
      [](double s, double k, double t, double vol) {
        return bachelier_log_time_value(OptionTerms(s, k, t), NormalVol(vol));
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::arg("vol"));
  m.def(
      "bachelier_tv_gamma",
      [](double s, double k, double t, double vol) {
        return bachelier_tv_gamma(OptionTerms(s, k, t), NormalVol(vol));
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::arg("vol"));
  m.def(
      "black_scholes_call",
      [](double s, double k, double t, double vol) {
        return black_scholes_call(OptionTerms(s, k, t), LognormalVol(vol));
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::arg("vol"));
  m.def("upper_gamma_neg_half", &special::upper_gamma_neg_half, py::arg("z"));

  m.def(
      "implied_normal",
      [](double s, double k, double t, std::optional<double> price, std::optional<double> time_value,
         std::optional<double> log_ratio, const std::string& method, double lambda_max) {
        const OptionTerms terms(s, k, t);
        const ImpliedResult r =
            implied_normal(make_quote(terms, price, time_value, log_ratio), parse_method(method), lambda_max);
        py::dict d;
        d["vol"] = r.vol.value();
        d["method"] = std::string(r.method);
        d["lambda"] = r.lambda;
        return d;
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::kw_only(), py::arg("price") = py::none(),
      py::arg("time_value") = py::none(), py::arg("log_ratio") = py::none(), py::arg("method") = "auto",
      py::arg("lambda_max") = kDefaultLambdaMax);
  m.def(
      "implied_lognormal",
      [](double s, double k, double t, std::optional<double> price, std::optional<double> time_value,
         std::optional<double> log_ratio) {
        const OptionTerms terms(s, k, t);
        return implied_lognormal_exact(make_quote(terms, price, time_value, log_ratio)).value();
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::kw_only(), py::arg("price") = py::none(),
      py::arg("time_value") = py::none(), py::arg("log_ratio") = py::none());

  m.def(
      "normal_from_lognormal",
      [](double s, double k, double t, double vol, const std::string& order) {
        const OptionTerms terms(s, k, t);
        const LognormalVol v(vol);
        if (order == "0") return normal_from_lognormal_order0(terms, v).value();
        if (order == "1") return normal_from_lognormal_order1(terms, v).value();
        if (order == "exact") return exact_normal_from_lognormal(terms, v).value();
        throw Error(ErrorKind::parameter, "order must be 0, 1 or exact");
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::arg("vol"), py::arg("order") = "exact");
  m.def(
      "lognormal_from_normal",
      [](double s, double k, double t, double vol, const std::string& order) {
        const OptionTerms terms(s, k, t);
        const NormalVol v(vol);
        if (order == "0") return lognormal_from_normal_order0(terms, v).value();
        if (order == "1") return lognormal_from_normal_order1(terms, v).value();
        if (order == "exact") return exact_lognormal_from_normal(terms, v).value();
        throw Error(ErrorKind::parameter, "order must be 0, 1 or exact");
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::arg("vol"), py::arg("order") = "exact");
  m.def(
      "correction_coefficient",
      [](double s, double k) { return correction_coefficient(OptionTerms(s, k, 1.0)); }, py::arg("spot"),
      py::arg("strike"));
  m.def("smile_shape", &smile_shape, py::arg("m"));
  m.def("breakeven_ratio", breakeven_ratio, py::arg("m"));

  m.def(
      "bachelier_greeks",
      [](double s, double k, double t, double vol, double dt) {
        return as_dict(bachelier_greeks(OptionTerms(s, k, t), NormalVol(vol), dt));
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::arg("vol"), py::arg("dt") = 1.0);
  m.def(
      "black_scholes_greeks",
      [](double s, double k, double t, double vol, double dt) {
        return as_dict(black_scholes_greeks(OptionTerms(s, k, t), LognormalVol(vol), dt));
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::arg("vol"), py::arg("dt") = 1.0);
  m.def(
      "greek_ratio_limits", [](double s, double k) { return as_dict(greek_ratio_limits(OptionTerms(s, k, 1.0))); },
      py::arg("spot"), py::arg("strike"));
  m.def(
      "measured_greek_ratios",
      [](double s, double k, double t, double normal_vol, double lognormal_vol) {
        return as_dict(
            measured_greek_ratios(OptionTerms(s, k, t), NormalVol(normal_vol), LognormalVol(lognormal_vol)));
      },
      py::arg("spot"), py::arg("strike"), py::arg("maturity"), py::arg("normal_vol"), py::arg("lognormal_vol"));
}
