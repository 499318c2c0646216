def assert_conservation(metrics):
    for link_id, link in metrics.links.items():
        assert (
            link["generated_bits"] - link["discarded_bits"] - link["consumed_bits"]
            == link["available_bits"]
        ), link_id
        assert (
            link["payload_key_bits"] + link["auth_key_bits"] + link["control_key_bits"]
            == link["consumed_bits"]
        ), link_id

    network = metrics.network
    assert network["delivered_bits"] <= network["payload_key_bits"]
    assert network["fidelity_violations"] == 0


def deliveries(sink, circuit_id):
    return [
        record["t"]
        for record in sink.records
        if record["kind"] == "delivery" and record["circuit"] == circuit_id
    ]
