"""
Which features carry the signal?
================================

An ablation study retrains the model with one feature group removed at a
time and compares held-out accuracy against the untouched baseline. The
groups are the 512 semantic slots, the 2 WAIS slots, and the 9 organization
slots. A correlation table against WAIS subscores rounds out the picture.

Four trainings on the default corpus take seven to eight minutes on one
core. The reduced epoch budget is enough to rank the feature groups; it is
not the budget you would ship a model with.
"""

from menuperf import (
    HashEmbedding,
    TrainConfig,
    bundled_taxonomy,
    generate_corpus,
    render_ablation_table,
    render_correlation_table,
    run_ablation,
    wais_performance_correlations,
)

taxonomy = bundled_taxonomy()
train_sessions, test_sessions = generate_corpus(taxonomy, seed=0)

# All four conditions retrain from the same seed with the same budget, so
# differences come only from the removed slots. Removal means zeroing the
# slots everywhere (train and test); pass drop_slots=True to physically
# shrink the vectors instead.
provider = HashEmbedding()
config = TrainConfig(epochs=250)
results = {}
for group in ("none", "wais", "semantics", "organization"):
    _, average, _ = run_ablation(
        train_sessions, test_sessions, config, group, provider
    )
    results[group] = average
    print(f"trained condition: {group}  "
          f"(R2 CE {average.r2_ce:.2f}, R2 PT {average.r2_pt:.2f})")

print()
print(render_ablation_table(results))

# Organization slots (where the target sits, how long the lists are) carry
# the planted pose law, so removing them should hurt most. The semantic
# channel feeds pointing time directly; WAIS only rescales per-user speed.

# The planted law also makes high-WAIS users faster and less fatigued, which
# shows up as negative correlations on the raw measurements.
corr = wais_performance_correlations(train_sessions + test_sessions)
print()
print(render_correlation_table(corr))
