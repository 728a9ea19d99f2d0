#pragma once

#include <string>
#include <vector>

#include "koecher/ideal.hpp"

namespace koecher::testing {

struct CurveRow {
  Int norm;
  const char* curve;
};

/// Published curves with their conductor norms.
inline const std::vector<CurveRow>& curve_table() {
  static const std::vector<CurveRow> rows = {
      {89, "[t-1, -t^2-1, t^2-t, t^2, 0]"},
      {107, "[0, -t, -t-1, -t^2-t, 0]"},
      {115, "[-t^2+t-1, -t^2+1, t-1, -1, -t^2]"},
      {136, "[-t^2, -1, -t^2+1, t+1, 0]"},
      {161, "[t^2-t-1, -t^2+t-1, t^2-t+1, t^2-t, t-1]"},
      {167, "[t^2+1, t+1, t^2+t-1, -t^2-t+1, -t^2+t+1]"},
      {185, "[t, -t^2+t+1, t+1, 0, 0]"},
      {223, "[1, t^2, t^2+t-1, -t^2+t-1, 1]"},
      {253, "[-1, -t^2-t, -t^2-t, -t^2-t, 0]"},
      {259, "[0, 1, -t^2-t-1, t^2-t+1, -t^2-t+1]"},
      {275, "[-t^2+t, t, t^2-t, 0, 0]"},
      {289, "[-1, t^2-t, t, 1, 0]"},
      {293, "[t^2-1, -t+1, t^2-t+1, 0, 0]"},
      {344, "[t-1, -t^2-t, -t^2+t+1, t^2-1, 0]"},
      {359, "[-t^2+1, t+1, t^2+1, t^2-t, -t+1]"},
      {385, "[-t^2, -t^2-t-1, -t^2-1, t^2+t, -t^2+1]"},
      {392, "[-t^2+1, -t^2+t+1, -t+1, t^2-1, t]"},
      {440, "[-t^2+1, -t^2-t+1, -t^2, -t, 0]"},
      {449, "[-t^2, 1, -t^2+t+1, t+1, 0]"},
      {475, "[0, -t, t^2+t, t^2-t+1, -t^2+1]"},
      {503, "[-t^2+t, -t^2+t+1, -t^2+t, -t^2+t, 0]"},
      {505, "[t^2-t, t^2-t+1, t^2+t, t^2-t+1, -t^2+1]"},
      {505, "[t^2-t-1, t^2-1, 0, t-1, 0]"},
      {512, "[0, t^2+1, 0, t^2, 0]"},
      {553, "[t, 1, t, 0, 0]"},
      {593, "[t, -t-1, t^2, -t^2+t+1, 0]"},
      {595, "[-t^2+t-1, -t^2+t+1, -t^2+t+1, -t^2+t+1, 0]"},
      {625, "[t, -t-1, t^2+1, 1, -t^2]"},
      {649, "[-t^2-t-1, -t, 0, -t^2+t-1, 0]"},
      {665, "[-t, -t^2+1, -t^2+t, -t^2+t, 0]"},
      {685, "[t^2-1, -t^2+t, -t^2+1, -t-1, t^2]"},
      {712, "[2*t^2-t-1, -t^2-2*t+2, t+2, 2*t^2+2*t, -2*t^2-t]"},
      {719, "[-t^2+t, -t^2+t-1, -1, 0, 0]"},
      {719, "[t^2-t-1, -t^2+t-1, 0, t^2-t, 0]"},
      {721, "[-t^2+t+1, -t^2+t-1, t^2+1, -t-1, -t+1]"},
      {727, "[1, t^2+t-1, t^2-t, -1, 0]"},
      {773, "[2*t^2-1, 2*t+1, 2*t^2+2*t, -t^2+2*t+1, -2*t^2-t]"},
      {805, "[-t^2-2*t+2, -2*t^2+2*t, t^2-t-1, -2*t^2+t+2, -2*t^2-t]"},
      {808, "[-t-2, 0, 2*t^2-t-2, -2*t^2+2*t+2, -2*t^2-t]"},
      {809, "[-t^2+t-1, t^2-1, t^2+1, t^2-t, -t^2]"},
      {809, "[t^2-1, t^2+t-1, t^2-t, t^2-t, 0]"},
      {817, "[-t^2+t, -t^2, t^2-t+1, -1, 0]"},
      {829, "[0, -t^2, t^2-t-1, 0, 0]"},
  };
  return rows;
}

struct ConductorRow {
  Int norm;
  const char* generator;
};

/// Published generators of the conductor ideals.
inline const std::vector<ConductorRow>& conductor_table() {
  static const std::vector<ConductorRow> rows = {
      {89, "4*t^2-t-5"},     {107, "-5*t^2+3*t"},    {115, "-2*t^2-2*t-3"},  {136, "6*t^2-2*t-2"},
      {161, "-5*t^2+5*t+4"}, {167, "-5*t^2+3*t-3"},  {185, "-t^2-5*t+4"},    {223, "6*t^2-5*t-2"},
      {253, "7*t^2-5*t-5"},  {259, "4*t^2-7*t-1"},   {275, "8*t^2-2*t-3"},   {289, "3*t^2-7*t-2"},
      {293, "-5*t^2-2*t-2"}, {344, "6*t^2-2*t-8"},   {359, "7*t^2-6*t-2"},   {385, "-6*t^2+7*t+5"},
      {392, "-8*t^2+6*t+6"}, {440, "8*t^2+2*t-6"},   {449, "t^2-8*t"},       {475, "-4*t^2-7*t"},
      {503, "t^2-t-8"},      {505, "-2*t^2-7*t+2"},  {505, "-8*t+1"},        {512, "8"},
      {553, "9*t^2-4*t-2"},  {593, "8*t^2-t-9"},     {595, "11*t^2-4*t-6"},  {625, "8*t^2+3*t+1"},
      {649, "8*t^2+t-8"},    {665, "9*t^2+t-8"},     {685, "-7*t^2+5*t-7"},  {712, "6*t^2-10*t-8"},
      {719, "t^2-t-9"},      {719, "11*t^2-4*t-5"},  {721, "8*t^2-9"},       {727, "10*t^2-7*t-7"},
      {773, "-3*t^2+12*t-5"}, {805, "3*t^2-6*t-10"}, {808, "-6*t^2-2*t-4"},  {809, "9*t^2-9*t-1"},
      {817, "-t^2-7*t-8"},   {829, "6*t^2-t-10"},
  };
  return rows;
}

/// Minimal-vector sets of the nine perfect forms, one per orbit.
inline const std::vector<std::vector<std::string>>& perfect_sets() {
  static const std::vector<std::vector<std::string>> sets = {
      {"(1,0)", "(0,1)", "(1,1)", "(t^2-t,t^2)", "(-t,-t)", "(1,-t^2+1)", "(0,-t)"},
      {"(1,0)", "(0,1)", "(-t,-t)", "(1,-t^2+1)", "(t^2-t,0)", "(0,-t)", "(t^2-t,t^2)"},
      {"(1,0)", "(0,1)", "(1,1)", "(t^2,1)", "(-t^2+1,-t^2)", "(-t,0)", "(-t,-t)", "(1,-t^2+1)", "(0,-t)"},
      {"(1,0)", "(0,1)", "(1,1)", "(t^2,1)", "(t^2-t,t^2)", "(1,-t^2+1)", "(0,-t)"},
      {"(1,0)", "(0,1)", "(1,1)", "(-t,-t)", "(t^2-t,0)", "(t^2-t,t^2)", "(0,-t)"},
      {"(1,0)", "(0,1)", "(0,-t)", "(t^2,t^2)", "(-t,-t)", "(t^2-t,0)", "(-1,-t)", "(t,t^2)"},
      {"(1,0)", "(0,1)", "(1,1)", "(t^2-t,t^2)", "(-t,-t)", "(t^2,t)", "(1,-t^2+1)"},
      {"(1,0)", "(0,1)", "(t^2,t^2-t)", "(1,t^2-t)", "(-t,0)", "(1,t^2)", "(t^2-t,-t)"},
      {"(1,0)", "(0,1)", "(1,1)", "(-t,0)", "(t^2-t,-t)", "(-t^2,-t^2+t)", "(t^2-t,t^2-t)"},
  };
  return sets;
}

}  // namespace koecher::testing
