#pragma once

#include <string>
#include <variant>

#include "semdiff/ad.hpp"
#include "semdiff/cd.hpp"
#include "semdiff/parse.hpp"

namespace fixtures {

inline std::string path(const std::string& file) { return std::string(SEMDIFF_FIXTURE_DIR) + "/" + file; }

inline semdiff::cd::CheckedClassDiagram cd(const std::string& name) {
    return semdiff::cd::validate_cd(std::get<semdiff::cd::ClassDiagram>(semdiff::text::load_source(path(name + ".cd")).model));
}

inline semdiff::cd::ObjectModel od(const std::string& name) {
    return std::get<semdiff::cd::ObjectModel>(semdiff::text::load_source(path(name + ".od")).model);
}

inline semdiff::ad::Activity ad(const std::string& name) {
    return semdiff::ad::validate_ad(std::get<semdiff::ad::ActivityDiagram>(semdiff::text::load_source(path(name + ".ad")).model));
}

inline semdiff::cd::CheckedClassDiagram cd_text(const std::string& text) {
    return semdiff::cd::validate_cd(semdiff::text::parse_cd(text));
}

inline semdiff::ad::Activity ad_text(const std::string& text) {
    return semdiff::ad::validate_ad(semdiff::text::parse_ad(text));
}

} // namespace fixtures
