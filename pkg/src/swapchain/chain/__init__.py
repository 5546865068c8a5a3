from swapchain.chain.closed_form import (
    ACTIVATION_WEIGHT,
    CriticalResult,
    critical_n,
    critical_search,
    in_model,
    iterate_all_psi,
    k_from_swaps,
    n_swaps,
    p_k_closed,
    p_k_limit,
    p_Rnk_closed,
    p_Rnk_alternative,
    rho_k_closed,
    rho_Rn_closed,
    rho_Rnk_closed,
    simulate_all_psi,
)
