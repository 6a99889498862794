//! VIN-rooted nonce chains. Link `c_0` is the raw VIN, `c_{i+1} = H(c_i)`,
//! and the published anchor is `c_L`. Revealing `c_p` proves possession of
//! the chain: hashing it `L − p` times must land on the anchor.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256, Sha512_256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainHash {
    #[default]
    Sha256,
    Sha512_256,
}

impl ChainHash {
    pub fn digest(self, bytes: &[u8]) -> [u8; 32] {
        match self {
            ChainHash::Sha256 => Sha256::digest(bytes).into(),
            ChainHash::Sha512_256 => Sha512_256::digest(bytes).into(),
        }
    }
}

pub const VIN_LEN: usize = 17;

pub fn validate_vin(vin: &str) -> Result<()> {
    if vin.len() != VIN_LEN || !vin.bytes().all(|b| b.is_ascii_alphanumeric()) {
        return Err(Error::Format(format!("VIN must be {VIN_LEN} ASCII alphanumerics, got {vin:?}")));
    }
    Ok(())
}

/// Links `c_0 ..= c_len`; `c_0` is the VIN bytes themselves.
pub fn chain_links(vin: &str, len: u32, hash: ChainHash) -> Result<Vec<Vec<u8>>> {
    validate_vin(vin)?;
    let mut links = Vec::with_capacity(len as usize + 1);
    links.push(vin.as_bytes().to_vec());
    for i in 0..len as usize {
        links.push(hash.digest(&links[i]).to_vec());
    }
    Ok(links)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VehicleIdentity {
    pub vehicle_id: String,
    pub vin: String,
    pub chain_anchor: [u8; 32],
    pub chain_length: u32,
    #[serde(default)]
    pub hash: ChainHash,
}

impl VehicleIdentity {
    pub fn new(vehicle_id: impl Into<String>, vin: &str, chain_length: u32, hash: ChainHash) -> Result<Self> {
        if chain_length == 0 {
            return Err(Error::Domain("chain length must be at least 1".into()));
        }
        let links = chain_links(vin, chain_length, hash)?;
        let mut chain_anchor = [0u8; 32];
        chain_anchor.copy_from_slice(&links[chain_length as usize]);
        Ok(Self { vehicle_id: vehicle_id.into(), vin: vin.to_string(), chain_anchor, chain_length, hash })
    }

    /// The link a vehicle reveals for `position`.
    pub fn preimage_at(&self, position: u32) -> Result<Vec<u8>> {
        if position >= self.chain_length {
            return Err(Error::Domain(format!(
                "position {position} outside chain of length {}",
                self.chain_length
            )));
        }
        Ok(chain_links(&self.vin, position, self.hash)?.pop().expect("chain has c_0"))
    }
}

/// A revealed chain link and its claimed position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainProof {
    pub preimage: Vec<u8>,
    pub position: u32,
}

pub fn validate_identity(claim: &VehicleIdentity, preimage: &[u8], position: u32) -> Result<bool> {
    if position >= claim.chain_length {
        return Err(Error::Domain(format!(
            "position {position} must be below chain length {}",
            claim.chain_length
        )));
    }
    let mut link = claim.hash.digest(preimage);
    for _ in 1..claim.chain_length - position {
        link = claim.hash.digest(&link);
    }
    Ok(link == claim.chain_anchor)
}

/// Wire form `{vehicle_id, anchor_hex, chain_length, position, preimage_hex}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainExchange {
    pub vehicle_id: String,
    pub anchor_hex: String,
    pub chain_length: u32,
    pub position: u32,
    pub preimage_hex: String,
}

impl ChainExchange {
    pub fn from_proof(identity: &VehicleIdentity, proof: &ChainProof) -> Self {
        Self {
            vehicle_id: identity.vehicle_id.clone(),
            anchor_hex: hex::encode(identity.chain_anchor),
            chain_length: identity.chain_length,
            position: proof.position,
            preimage_hex: hex::encode(&proof.preimage),
        }
    }

    pub fn anchor(&self) -> Result<[u8; 32]> {
        let mut out = [0u8; 32];
        hex::decode_to_slice(&self.anchor_hex, &mut out)
            .map_err(|e| Error::Format(format!("anchor_hex {:?}: {e}", self.anchor_hex)))?;
        Ok(out)
    }

    pub fn proof(&self) -> Result<ChainProof> {
        let preimage = hex::decode(&self.preimage_hex)
            .map_err(|e| Error::Format(format!("preimage_hex {:?}: {e}", self.preimage_hex)))?;
        Ok(ChainProof { preimage, position: self.position })
    }

    /// Checks the message against its own anchor. The VIN is not transmitted.
    pub fn verify(&self, hash: ChainHash) -> Result<bool> {
        let claim = VehicleIdentity {
            vehicle_id: self.vehicle_id.clone(),
            vin: String::new(),
            chain_anchor: self.anchor()?,
            chain_length: self.chain_length,
            hash,
        };
        let proof = self.proof()?;
        validate_identity(&claim, &proof.preimage, proof.position)
    }
}
