"""Process generators, model specs and analytic oracles."""
from .models import (Family, ModelKind, ModelSpec, ModelSpecError, Monomial, ProcessSpec,
                     TrendKind, TrendSpec, get_model, model_from_config, prop1_model,
                     prop2_model, prop3_model, registry_names, sample_model)
from .oracles import (BayesErrorEstimate, NoBayesRuleError, analytic_v2_curve, bayes_error,
                      bayes_rule_for, bayes_rule_prop1, bayes_rule_prop2, bayes_rule_prop3,
                      eta_prop1, eta_prop2, eta_prop3, folded_normal_mean, prop1_threshold,
                      prop2_threshold, prop3_threshold)
from .processes import (RngStream, bridge_grid, default_grid, peak_points, phi_peak,
                        sample_brownian, sample_brownian_bridge, sample_ou, smooth_trajectory)
