// End-to-end walk through the pipeline on a tiny dataset: generate
// environments, mint one instance, show the question and its elimination
// trace, then the aggregate statistics.

#include <iostream>

#include "obscura/obscura.hpp"

using namespace obscura;

int main() {
    GenerationConfig cfg;
    cfg.environment_count = 4;
    cfg.master_seed = 7;

    GeneratedDataset dataset = generate_dataset(cfg, 8);
    const DatasetInstance& inst = dataset.instances.front();

    std::cout << "=== environment " << inst.environment.id << " ===\n"
              << render_environment_nl(inst.environment) << "\n";

    std::cout << "=== scene ===\n";
    for (const ObjectSpec& o : inst.complete.objects)
        std::cout << "  object " << o.id << ": "
                  << attr_value_name({Attribute::Size, o.size}) << " "
                  << attr_value_name({Attribute::Color, o.color}) << " "
                  << attr_value_name({Attribute::Material, o.material}) << " "
                  << attr_value_name({Attribute::Shape, o.shape}) << " in region "
                  << int(o.region) << (o.id == inst.hidden.id ? "  (hidden)" : "") << "\n";

    std::cout << "\n=== question ===\n"
              << inst.question.nl << "\n"
              << render_question_asp(inst.question.form) << "\n";

    SolveResult result = solve(inst.partial, inst.environment, inst.question.form);
    std::cout << "\n=== reasoning ===\n"
              << render_trace(result, inst.environment, inst.question.form);

    std::cout << "\ngold envelope: " << answer_envelope(inst.question.answers) << "\n";
    std::cout << "hidden object's actual value: "
              << attr_value_name(
                     {inst.question.form.query_attribute, inst.question.ground_truth})
              << "\n";

    std::cout << "\n=== dataset statistics ===\n" << format_stats(dataset_stats(dataset));
    return 0;
}
