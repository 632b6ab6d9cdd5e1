#ifndef CARFIR_SERIALIZATION_HPP
#define CARFIR_SERIALIZATION_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "carfir/dataset.hpp"
#include "carfir/fuzzifier.hpp"
#include "carfir/identification.hpp"
#include "carfir/mixed.hpp"
#include "carfir/sugeno.hpp"

namespace carfir {

/// One variable's preprocessing state: the normalization record plus the
/// class partition over its normalized values.
struct VariableModel {
    std::string name;
    bool is_output = false;
    SeriesRange norm;
    Partition partition;
};

void save_variables(const std::vector<VariableModel>& vars, std::ostream& sink);
std::vector<VariableModel> load_variables(std::istream& source);

void save_pattern_rules(const PatternRuleBase& prb, std::ostream& sink);
PatternRuleBase load_pattern_rules(std::istream& source);

void save_sugeno(const SugenoRuleBase& srb, std::ostream& sink);
SugenoRuleBase load_sugeno(std::istream& source);

void save_error_models(const std::vector<ErrorModel>& models, std::ostream& sink);
std::vector<ErrorModel> load_error_models(std::istream& source);

void save_mixed(const MixedModel& mm, std::ostream& sink);
MixedModel load_mixed(std::istream& source);

// file-path conveniences
void save_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

} // namespace carfir

#endif
