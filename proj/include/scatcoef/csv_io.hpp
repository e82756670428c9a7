#pragma once

#include <string>
#include <vector>

#include "scatcoef/reconstruct.hpp"
#include "scatcoef/scatmat.hpp"

namespace scatcoef::csv {

// All numbers are written with 17 significant digits so files round-trip exactly.
std::string format_number(double v);

// n,m,re,im
std::string w_to_string(const ScatteringMatrix& W);
ScatteringMatrix w_from_string(const std::string& text, double k);

// k,P,Q,sigma,seed / values / p,q,theta_xi,theta_x,re,im / rows
std::string farfield_to_string(const FarFieldData& data);
FarFieldData farfield_from_string(const std::string& text);

// n,m,l,re,im
std::string h_to_string(const std::vector<HCoefficients>& H);

// r,value[,truth] | theta,value[,truth] | r,theta,value[,truth]
std::string reconstruction_to_string(const ReconstructionResult& res);

std::string read_file(const std::string& path);
// Fails if the file already exists.
void write_new_file(const std::string& path, const std::string& content);

}  // namespace scatcoef::csv
