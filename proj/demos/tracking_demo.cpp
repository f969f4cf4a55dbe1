// Minimal usage example: stream partially observed snapshots from a static
// spiked model into two trackers and print the projection error over time.

#include "substream/substream.hpp"

#include <cstdio>

int main() {
    using namespace substream;

    ScenarioConfig scenario;
    scenario.kind = ScenarioKind::Static;
    scenario.snapshots = 2000;
    scenario.seed = 7;

    SpikedModelConfig model;
    model.d = 100;
    model.k = 5;
    model.loading = Vector::Ones(model.k);
    model.sigma = 1e-4;
    model.alpha = 0.5;

    ScenarioStream stream(scenario, model);

    RandomStream init_rng(42);
    Matrix G(model.d, model.k);
    for (int j = 0; j < model.k; ++j)
        for (int i = 0; i < model.d; ++i) G(i, j) = init_rng.normal();
    const Subspace init = orthonormalize(G);

    auto grouse = make_tracker(TrackerKind::Grouse, {}, init);
    auto petrels = make_tracker(TrackerKind::Petrels, {}, init);

    std::printf("%8s %12s %12s\n", "n", "grouse", "petrels");
    for (long n = 1; n <= scenario.snapshots; ++n) {
        const PartialObservation obs = stream.next();
        grouse->update(obs);
        petrels->update(obs);
        if (n % 200 == 0)
            std::printf("%8ld %12.3e %12.3e\n", n,
                        projection_error(grouse->estimate(), stream.truth()),
                        projection_error(petrels->estimate(), stream.truth()));
    }
    return 0;
}
