#pragma once

#include <string>
#include <vector>

namespace effalg {

struct Violation {
    std::string axiom;        // "EA1".."EA4", "MV1".."MV4", "(i)".."(iii)", check label
    std::vector<int> witness; // element indices instantiating the failure
    std::string detail;       // optional human-readable note
};

struct ValidationReport {
    bool valid = true;
    std::vector<Violation> violations;

    void fail(std::string axiom, std::vector<int> witness, std::string detail = "") {
        valid = false;
        violations.push_back({std::move(axiom), std::move(witness), std::move(detail)});
    }
};

}  // namespace effalg
