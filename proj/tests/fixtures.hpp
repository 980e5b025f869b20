#pragma once

// Reference invariants and class polynomials used as oracles. z is zeta_M for the level of the basis.
// Labels: g0..g3 for the level-72 family; nuN0, nu0..nu{N-1} for the level-24N family.

#include <string>
#include <vector>

namespace fixtures {

// D = -571, level 72
inline const char* kI1_571 = "g0*g2 + (z^6)*g1*g3";
inline const char* kI2_571 = "g0*g3 + (-z^18+z^6)*g1*g2";
// descended pair; the first gives the second listed polynomial and vice versa
inline const char* kE1_571 = "(-12z^18+12z^6)*g0*g2 + (12z^6)*g0*g3 + 12*g1*g2 + 12*g1*g3";
inline const char* kE2_571 = "(12z^6)*g0*g2 + (-12z^18+12z^6)*g0*g3 + (-12z^12+12)*g1*g2 + (12z^12)*g1*g3";
inline const char* kPolyE1_571 = "t^5 - 936*t^4 - 60912*t^3 - 2426112*t^2 - 40310784*t - 3386105856";
inline const char* kPolyE2_571 = "t^5 - 1512*t^4 - 29808*t^3 + 979776*t^2 + 3359232*t - 423263232";

// D = -91, level 120
inline const char* kH1_91_5 = "nuN0 + (z^25-z^5)*nu3";
inline const char* kH2_91_5 = "nu0 + (z^31-z^23-z^19-z^15+z^7+z^3)*nu1";
inline const char* kI1_91_5 =
    "(-1224z^28+612z^20+2740z^16+1516z^4-612)*nuN0 + (4256z^28-2128z^20-1516z^16+2740z^4+2128)*nu0"
    " + (-1224z^31-2740z^27+612z^15+1224z^11+1516z^3)*nu1 + (1516z^29-612z^25+1224z^13-1516z^9-2740z)*nu3";
inline const char* kI2_91_5 =
    "(-1952z^28+976z^20+2128z^16+176z^4-976)*nuN0 + (2304z^28-1152z^20-176z^16+2128z^4+1152)*nu0"
    " + (-1952z^31-2128z^27+976z^15+1952z^11+176z^3)*nu1 + (176z^29-976z^25+1952z^13-176z^9-2128z)*nu3";
inline const char* kPolyI1_91_5 = "t^2 - 3060*t - 28090800";
inline const char* kPolyI2_91_5 = "t^2 - 4880*t - 71443200";

// D = -91, level 168: the six H-invariant quadrics
inline const std::vector<std::string> kI_91_7 = {
    "nuN0^2 - nu0^2 + (-z^42+z^14)*nu1^2 + (z^28-1)*nu2^2 + (-z^42)*nu3^2 + (-z^14)*nu5^2 + nu6^2",
    "nuN0*nu0 + (z^35)*nuN0*nu1 + (-z^28)*nu0*nu2 + (z^35)*nu1*nu6 + (-z^35)*nu2*nu5 + (z^42-z^14)*nu3*nu5 + (z^21)*nu3*nu6",
    "nuN0*nu2 + (z^28-1)*nuN0*nu6 + (z^7)*nu0*nu1 + (-z^35+z^7)*nu0*nu5 + (z^28)*nu1*nu3 + (z^35-z^7)*nu2*nu3 + (-z^21)*nu5*nu6",
    "nuN0*nu3 + (-z^42+z^14)*nuN0*nu5 + (z^42)*nu0*nu3 + (-z^35+z^7)*nu0*nu6 + (-z^42)*nu1*nu2 + (z^35-z^7)*nu1*nu5"
    " + (-z^45+z^37+z^33-z^25+z^17+z^13-z^5-z)*nu2*nu6",
    "nuN0*nu4 + (z^42)*nu0*nu4 + (-z^45+z^37+z^33-z^25-z^21+z^17+z^13-z^5-z)*nu1*nu4 + (-z^28)*nu2*nu4 + (z^35-z^7)*nu3*nu4"
    " + (-z^45+z^37+z^33-z^25+z^17+z^13-z^5-z)*nu4*nu5 + nu4*nu6",
    "nu4^2",
};

// a descended invariant for D = -91, level 168
inline const char* kF1_91_7 =
    "(-4z^44+4z^36+4z^32+4z^16-4z^4+48)*nuN0^2"
    " + (4z^46+12z^42-4z^38-4z^34-4z^30+4z^26+4z^22-4z^14+4z^6+4z^2)*nuN0*nu0"
    " + (-8z^45+4z^41+8z^37+8z^33-8z^25-8z^21+12z^17+8z^13-12z^5-8z)*nuN0*nu1"
    " + (-4z^36+16z^28-4z^16+4z^8+4z^4)*nuN0*nu2"
    " + (16z^47-28z^35+16z^27-16z^19+28z^7+16z^3)*nuN0*nu3"
    " + (-8z^38-8z^34+8z^26+16z^14+8z^6)*nuN0*nu4"
    " + (12z^45-28z^37-12z^33+28z^25-12z^17-12z^13+12z^5+28z)*nuN0*nu5"
    " + (-4z^44+4z^36+4z^32+4z^16-4z^4-16)*nuN0*nu6"
    " + (4z^44-4z^36-4z^32-4z^16+4z^4-48)*nu0^2"
    " + (-4z^43+16z^35-4z^23+4z^15+4z^11)*nu0*nu1"
    " + (-4z^46-12z^42+4z^30-4z^22+12z^14-4z^2)*nu0*nu2"
    " + (16z^45+16z^41-16z^33+28z^21-16z^13)*nu0*nu3"
    " + (-8z^44+8z^32+24z^28+8z^8-24)*nu0*nu4"
    " + (-4z^47-4z^43+4z^35-4z^27-4z^23+4z^19+4z^15+4z^11+12z^7-4z^3)*nu0*nu5"
    " + (16z^46-12z^42-16z^38-16z^34-16z^30+16z^26+16z^22-16z^14+16z^6+16z^2)*nu0*nu6"
    " + (4z^46-48z^42-4z^30+4z^22+48z^14+4z^2)*nu1^2"
    " + (-16z^45-16z^41+16z^33-28z^21+16z^13)*nu1*nu2"
    " + (-4z^44+4z^32+16z^28+4z^8-16)*nu1*nu3"
    " + (8z^47+8z^43-8z^35+8z^27+8z^23-8z^19-8z^15-8z^11-16z^7+8z^3)*nu1*nu4"
    " + (-16z^46+12z^42+16z^38+16z^34+16z^30-16z^26-16z^22+16z^14-16z^6-16z^2)*nu1*nu5"
    " + (-8z^45+4z^41+8z^37+8z^33-8z^25-8z^21+12z^17+8z^13-12z^5-8z)*nu1*nu6"
    " + (4z^44-4z^32+48z^28-4z^8-48)*nu2^2"
    " + (4z^47+4z^43-4z^35+4z^27+4z^23-4z^19-4z^15-4z^11-12z^7+4z^3)*nu2*nu3"
    " + (-8z^46-24z^42+8z^38+8z^34+8z^30-8z^26-8z^22+8z^14-8z^6-8z^2)*nu2*nu4"
    " + (8z^45-4z^41-8z^37-8z^33+8z^25+8z^21-12z^17-8z^13+12z^5+8z)*nu2*nu5"
    " + (16z^36+12z^28+16z^16-16z^8-16z^4)*nu2*nu6"
    " + (4z^46-48z^42-4z^38-4z^34-4z^30+4z^26+4z^22-4z^14+4z^6+4z^2)*nu3^2"
    " + (-16z^45+8z^41+16z^37+16z^33-16z^25-16z^21+24z^17+16z^13-24z^5-16z)*nu3*nu4"
    " + (4z^36-12z^28+4z^16-4z^8-4z^4)*nu3*nu5"
    " + (4z^47+8z^35+4z^27-4z^19-8z^7+4z^3)*nu3*nu6"
    " + (-12z^36+12z^28-12z^16+12z^8+12z^4)*nu4^2"
    " + (8z^47+16z^35+8z^27-8z^19-16z^7+8z^3)*nu4*nu5"
    " + (-8z^38-8z^34+8z^26+16z^14+8z^6)*nu4*nu6"
    " + (-4z^38-4z^34+4z^26-52z^14+4z^6)*nu5^2"
    " + (16z^45-12z^37-16z^33+12z^25-16z^17-16z^13+16z^5+12z)*nu5*nu6"
    " + (-4z^44+4z^36+4z^32+4z^16-4z^4+48)*nu6^2";

// the six reference quadratics for D = -91, level 168; F1 gives the first
inline const std::vector<std::string> kPolys_91_7 = {
    "t^2 + (420-8*sqrt(-91))*t - 20048",    "t^2 + (672+40*sqrt(-91))*t - 57344",
    "t^2 + (672+112*sqrt(-91))*t - 137984", "t^2 + (1218+30*sqrt(-91))*t - 171136",
    "t^2 + (630-66*sqrt(-91))*t - 74592",   "t^2 + (798+54*sqrt(-91))*t - 91168",
};

// D = -299, level 72
inline const char* kI1_299 = "(12z^12)*g0^2 + (-12z^12+12)*g1^2 + 36*g2*g3";
inline const char* kI2_299 = "(36z^12)*g0^2 + 12*g2*g3";
inline const char* kI3_299 = "(24z^12)*g0^2 + (-12z^18+24z^6)*g0*g1 + 24*g2*g3";
inline const char* kI4_299 = "(12z^12)*g0^2 + (-12z^18+24z^6)*g0*g1 + 36*g2*g3";
inline const char* kG2G3 = "g2*g3";
inline const char* kPolyG2G3_299 = "t^8 + t^7 - t^6 - 12*t^5 + 16*t^4 - 12*t^3 + 15*t^2 - 13*t + 1";
inline const char* kPolyP1_299 =
    "t^8 - 132*t^7 - 3600*t^6 - 1057536*t^5 + 67578624*t^4 + 2988223488*t^3 + 159765073920*t^2 + 5279816908800*t"
    " + 59659100356608";

// Hilbert class polynomial for D = -91
inline const char* kHilbert91 = "t^2 + 10359073013760*t - 3845689020776448";

}  // namespace fixtures
